// Copyright 2026 The WallForge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "wallforge/geometry.hpp"

namespace wallforge::layout {

using geometry::AxisRect;
using geometry::Axis;
using geometry::Length;
using geometry::Point2;

inline const std::vector<Length> kStandardThicknesses{200, 250, 300};

/// Length-to-thickness thresholds separating columns, short-limb walls and
/// regular walls: ratio <= column_ratio is a column, <= short_ratio a short limb.
struct LimbThresholds {
  double column_ratio = 4.0;
  double short_ratio = 8.0;
};

enum class LimbClass { Column, ShortLimb, RegularWall };

LimbClass classify_limb(Length length, Length thickness, const LimbThresholds& t = {});
std::string_view to_string(LimbClass c);

/// A straight wall segment. `start` < `end` along the limb's axis; the
/// thickness is centered on the centerline (floor(t/2) below / left).
struct WallLimb {
  Point2 start;
  Point2 end;
  Length thickness = 200;
  int component_id = 0;

  Axis axis() const { return start.y == end.y ? Axis::X : Axis::Y; }
  Length length() const { return (end.x - start.x) + (end.y - start.y); }
  AxisRect rect() const;

  bool operator==(const WallLimb&) const = default;
};

/// Limb along the rect's long axis (width >= height counts as X).
WallLimb limb_from_rect(const AxisRect& rect, int component_id = 0);

struct Junction {
  AxisRect region;
  std::vector<int> limbs;
  bool operator==(const Junction&) const = default;
};

enum class ColumnShape { Rectangular, Irregular };

struct ColumnBlob {
  ColumnShape shape = ColumnShape::Rectangular;
  AxisRect bounds;
  std::vector<AxisRect> parts;  // exact cover of the blob
  std::vector<double> limb_ratios;
  int component_id = 0;
  bool operator==(const ColumnBlob&) const = default;
};

struct LayoutGraph {
  std::vector<WallLimb> limbs;
  std::vector<Junction> junctions;
  std::vector<ColumnBlob> columns;
  std::string source;  // candidate or edit provenance
  Length scale = 100;  // mm per pixel of the raster it came from

  bool operator==(const LayoutGraph&) const = default;
};

/// Rebuilds `junctions` from positive-area overlaps between limb rects.
void recompute_junctions(LayoutGraph& graph);

/// Throws InvalidGeometry when a limb is degenerate or off the standard
/// thickness set, when same-axis limbs overlap beyond a junction-sized region,
/// or when a junction references fewer than two limbs.
void validate(const LayoutGraph& graph,
              const std::vector<Length>& standard_thicknesses = kStandardThicknesses);

/// Same limbs and columns regardless of order or provenance.
bool same_geometry(const LayoutGraph& a, const LayoutGraph& b);

LayoutGraph translated(const LayoutGraph& graph, Length dx, Length dy);
/// Quarter turn counter-clockwise about the origin: (x, y) -> (-y, x).
LayoutGraph rotated90(const LayoutGraph& graph);

/// All shear-element rects (limb rects and column parts).
std::vector<AxisRect> shear_rects(const LayoutGraph& graph);

void to_json(nlohmann::json& j, const LayoutGraph& g);
void from_json(const nlohmann::json& j, LayoutGraph& g);
void to_json(nlohmann::json& j, const WallLimb& limb);
void from_json(const nlohmann::json& j, WallLimb& limb);

}  // namespace wallforge::layout
