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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "wallforge/geometry.hpp"

namespace wallforge::plan {

using geometry::AxisRect;
using geometry::Length;
using geometry::Point2;
using geometry::Polyline;

// ---------------------------------------------------------------------------
// DXF subset: LINE, LWPOLYLINE and the LAYER table. Everything else in the
// ENTITIES section is counted per type and skipped.

struct DxfVertex {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const DxfVertex&) const = default;
};

enum class DxfEntityKind { Line, LwPolyline };

struct DxfEntity {
  DxfEntityKind kind = DxfEntityKind::Line;
  std::string handle;  // group code 5; synthesized as "#<index>" when absent
  std::string layer;
  std::vector<DxfVertex> vertices;
  bool closed = false;
  bool operator==(const DxfEntity&) const = default;
};

struct DxfDocument {
  std::string version;  // $ACADVER, empty when the header omits it
  std::vector<std::string> layers;
  std::vector<DxfEntity> entities;
  std::map<std::string, int> skipped;  // entity type -> count
};

DxfDocument parse_dxf(std::string_view bytes);
std::string write_dxf(const DxfDocument& doc);

// ---------------------------------------------------------------------------

enum class SemanticClass { ArchWall, ShearWall, Opening, Outline, Ignore };

std::string_view to_string(SemanticClass c);
SemanticClass semantic_class_from_string(std::string_view name);

/// Ordered (pattern, class) list; the first glob pattern matching a layer
/// name wins. Matching is case-insensitive, as layer names are in CAD.
struct LayerMap {
  std::vector<std::pair<std::string, SemanticClass>> entries;

  std::optional<SemanticClass> classify(std::string_view layer) const;
  void validate() const;
};

struct StoryMeta {
  Length story_height = 3000;
  int num_stories = 18;
  std::string seismic_label = "Shear Wall Layout";

  void validate() const;
  bool operator==(const StoryMeta&) const = default;
};

/// Everything read from a layer config file (`key = value` lines):
///   layers.<glob> = ArchWall|ShearWall|Opening|Outline|Ignore
///   thickness.<ArchWall|ShearWall|Opening> = <mm>
///   story.height / story.count / story.label
///   plan.max_extent = <mm>
struct IngestConfig {
  LayerMap layers;
  Length arch_wall_thickness = 200;
  Length shear_wall_thickness = 200;
  Length opening_thickness = 200;
  StoryMeta story;
  Length max_extent = 60000;
};

IngestConfig parse_ingest_config(std::string_view text);

struct FloorPlan {
  Polyline outline;
  std::vector<AxisRect> arch_walls;
  std::vector<AxisRect> openings;
  std::vector<AxisRect> shear_walls;
  StoryMeta story;

  /// Bounding box of the outline and of every rect in the plan.
  AxisRect extent() const;
  bool operator==(const FloorPlan&) const = default;
};

struct IngestResult {
  FloorPlan plan;
  int unmatched_entities = 0;  // entities on layers no pattern matched
  int ignored_entities = 0;    // entities on layers mapped to Ignore
};

/// Classifies entities, inflates wall centerlines to rects (thickness/2 on
/// each side and past each end so corners close) and picks the outline.
IngestResult apply_layer_map(const DxfDocument& doc, const IngestConfig& config);

inline constexpr Length kNormalizeGrid = 50;

/// Moves the extent's min corner to the origin and snaps every coordinate to
/// a 50 mm grid. Rects that collapse under snapping are dropped. Idempotent.
FloorPlan normalize_plan(const FloorPlan& plan);

/// Convenience: parse + classify + normalize.
FloorPlan ingest(std::string_view dxf_bytes, const IngestConfig& config);

void to_json(nlohmann::json& j, const FloorPlan& plan);
void from_json(const nlohmann::json& j, FloorPlan& plan);

}  // namespace wallforge::plan
