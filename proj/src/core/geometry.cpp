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

#include "wallforge/geometry.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "wallforge/error.hpp"

namespace wallforge::geometry {

namespace {

Length floor_div(Length a, Length b) {
  Length q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

AxisRect make_rect(Length x0, Length y0, Length x1, Length y1) {
  return AxisRect{{std::min(x0, x1), std::min(y0, y1)},
                  {std::max(x0, x1), std::max(y0, y1)}};
}

Length snap_to_grid(Length value, Length grid) {
  if (grid <= 0) fail(ErrorCode::InvalidArgument, "snap grid must be positive");
  // round(v / g) with halves toward +inf == floor((2v + g) / 2g)
  return floor_div(2 * value + grid, 2 * grid) * grid;
}

Point2 snap_to_grid(Point2 p, Length grid) {
  return {snap_to_grid(p.x, grid), snap_to_grid(p.y, grid)};
}

Area rect_overlap_area(const AxisRect& a, const AxisRect& b) {
  const Length w = std::min(a.max.x, b.max.x) - std::max(a.min.x, b.min.x);
  const Length h = std::min(a.max.y, b.max.y) - std::max(a.min.y, b.min.y);
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

bool rects_touch(const AxisRect& a, const AxisRect& b) {
  const Length w = std::min(a.max.x, b.max.x) - std::max(a.min.x, b.min.x);
  const Length h = std::min(a.max.y, b.max.y) - std::max(a.min.y, b.min.y);
  if (w < 0 || h < 0) return false;
  return w > 0 || h > 0;
}

bool contains(const AxisRect& outer, const AxisRect& inner) {
  return outer.min.x <= inner.min.x && outer.min.y <= inner.min.y &&
         inner.max.x <= outer.max.x && inner.max.y <= outer.max.y;
}

AxisRect bounding_union(const AxisRect& a, const AxisRect& b) {
  return AxisRect{{std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y)},
                  {std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y)}};
}

AxisRect bounding_box(std::span<const AxisRect> rects) {
  if (rects.empty()) return {};
  AxisRect box = rects.front();
  for (const auto& r : rects.subspan(1)) box = bounding_union(box, r);
  return box;
}

AxisRect bounding_box(const Polyline& line) {
  if (line.vertices.empty()) return {};
  AxisRect box{line.vertices.front(), line.vertices.front()};
  for (const auto& p : line.vertices) {
    box.min.x = std::min(box.min.x, p.x);
    box.min.y = std::min(box.min.y, p.y);
    box.max.x = std::max(box.max.x, p.x);
    box.max.y = std::max(box.max.y, p.y);
  }
  return box;
}

AxisRect translated(const AxisRect& r, Length dx, Length dy) {
  return AxisRect{{r.min.x + dx, r.min.y + dy}, {r.max.x + dx, r.max.y + dy}};
}

std::vector<AxisRect> merge_collinear(std::span<const AxisRect> rects, Axis axis,
                                      Length gap_tol) {
  if (gap_tol < 0) fail(ErrorCode::InvalidArgument, "gap_tol must be non-negative");

  auto band_of = [axis](const AxisRect& r) {
    return axis == Axis::X ? std::pair{r.min.y, r.max.y} : std::pair{r.min.x, r.max.x};
  };
  auto lo = [axis](const AxisRect& r) { return axis == Axis::X ? r.min.x : r.min.y; };
  auto hi = [axis](const AxisRect& r) { return axis == Axis::X ? r.max.x : r.max.y; };

  std::map<std::pair<Length, Length>, std::vector<AxisRect>> bands;
  for (const auto& r : rects) bands[band_of(r)].push_back(r);

  std::vector<AxisRect> out;
  out.reserve(rects.size());
  for (auto& [band, members] : bands) {
    std::sort(members.begin(), members.end(), [&](const AxisRect& a, const AxisRect& b) {
      return std::tuple{lo(a), hi(a)} < std::tuple{lo(b), hi(b)};
    });
    AxisRect current = members.front();
    for (std::size_t i = 1; i < members.size(); ++i) {
      const AxisRect& next = members[i];
      if (lo(next) - hi(current) <= gap_tol) {
        current = bounding_union(current, next);
      } else {
        out.push_back(current);
        current = next;
      }
    }
    out.push_back(current);
  }
  return out;
}

Area union_area(std::span<const AxisRect> rects) {
  std::vector<Length> xs;
  for (const auto& r : rects) {
    if (!r.valid()) continue;
    xs.push_back(r.min.x);
    xs.push_back(r.max.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  Area total = 0;
  std::vector<std::pair<Length, Length>> spans;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const Length x0 = xs[i];
    const Length x1 = xs[i + 1];
    spans.clear();
    for (const auto& r : rects) {
      if (r.valid() && r.min.x <= x0 && r.max.x >= x1) spans.emplace_back(r.min.y, r.max.y);
    }
    std::sort(spans.begin(), spans.end());
    Length covered = 0;
    Length run_lo = 0;
    Length run_hi = 0;
    bool open = false;
    for (const auto& [y0, y1] : spans) {
      if (!open || y0 > run_hi) {
        if (open) covered += run_hi - run_lo;
        run_lo = y0;
        run_hi = y1;
        open = true;
      } else {
        run_hi = std::max(run_hi, y1);
      }
    }
    if (open) covered += run_hi - run_lo;
    total += covered * (x1 - x0);
  }
  return total;
}

}  // namespace wallforge::geometry
