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

// Integer-millimetre plan geometry. Everything here is axis aligned; curved
// or skewed input is rejected before it reaches these types.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace wallforge::geometry {

using Length = std::int64_t;  // millimetres
using Area = std::int64_t;    // square millimetres

struct Point2 {
  Length x = 0;
  Length y = 0;
  auto operator<=>(const Point2&) const = default;
};

/// Half-open in spirit: a rect covers [min, max) for rasterization purposes.
struct AxisRect {
  Point2 min;
  Point2 max;

  Length width() const { return max.x - min.x; }
  Length height() const { return max.y - min.y; }
  Area area() const { return width() * height(); }
  bool valid() const { return min.x < max.x && min.y < max.y; }
  Point2 center2() const { return {min.x + max.x, min.y + max.y}; }  // doubled

  auto operator<=>(const AxisRect&) const = default;
};

struct Polyline {
  std::vector<Point2> vertices;
  bool closed = false;

  bool operator==(const Polyline&) const = default;
};

enum class Axis { X, Y };

AxisRect make_rect(Length x0, Length y0, Length x1, Length y1);

/// Nearest multiple of `grid`; ties round toward +inf. Requires grid > 0.
Length snap_to_grid(Length value, Length grid);
Point2 snap_to_grid(Point2 p, Length grid);

Area rect_overlap_area(const AxisRect& a, const AxisRect& b);

/// True when the closed rects share at least a boundary segment of positive
/// length or overlap with positive area.
bool rects_touch(const AxisRect& a, const AxisRect& b);

bool contains(const AxisRect& outer, const AxisRect& inner);
AxisRect bounding_union(const AxisRect& a, const AxisRect& b);
AxisRect bounding_box(std::span<const AxisRect> rects);
AxisRect bounding_box(const Polyline& line);
AxisRect translated(const AxisRect& r, Length dx, Length dy);

/// Merges rects that share the same cross-axis band and whose along-axis gap
/// is at most `gap_tol` into their bounding union. Rects in other bands pass
/// through. Output is sorted (band, then along-axis start) and contains no
/// pair that would merge again.
std::vector<AxisRect> merge_collinear(std::span<const AxisRect> rects, Axis axis,
                                      Length gap_tol);

/// Area of the union of a rect set (coordinate-compressed sweep).
Area union_area(std::span<const AxisRect> rects);

}  // namespace wallforge::geometry
