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

#include "wallforge/layout.hpp"

#include <algorithm>
#include <tuple>

#include "wallforge/error.hpp"

namespace wallforge::layout {

LimbClass classify_limb(Length length, Length thickness, const LimbThresholds& t) {
  if (length <= 0 || thickness <= 0) {
    fail(ErrorCode::InvalidArgument, "limb length and thickness must be positive");
  }
  const double ratio = static_cast<double>(length) / static_cast<double>(thickness);
  if (ratio <= t.column_ratio) return LimbClass::Column;
  if (ratio <= t.short_ratio) return LimbClass::ShortLimb;
  return LimbClass::RegularWall;
}

std::string_view to_string(LimbClass c) {
  switch (c) {
    case LimbClass::Column: return "Column";
    case LimbClass::ShortLimb: return "ShortLimb";
    case LimbClass::RegularWall: return "RegularWall";
  }
  return "RegularWall";
}

AxisRect WallLimb::rect() const {
  const Length lo = thickness / 2;
  if (axis() == Axis::X) {
    return AxisRect{{start.x, start.y - lo}, {end.x, start.y - lo + thickness}};
  }
  return AxisRect{{start.x - lo, start.y}, {start.x - lo + thickness, end.y}};
}

WallLimb limb_from_rect(const AxisRect& r, int component_id) {
  WallLimb limb;
  limb.component_id = component_id;
  if (r.width() >= r.height()) {
    const Length y = r.min.y + r.height() / 2;
    limb.start = {r.min.x, y};
    limb.end = {r.max.x, y};
    limb.thickness = r.height();
  } else {
    const Length x = r.min.x + r.width() / 2;
    limb.start = {x, r.min.y};
    limb.end = {x, r.max.y};
    limb.thickness = r.width();
  }
  return limb;
}

void recompute_junctions(LayoutGraph& graph) {
  graph.junctions.clear();
  const auto n = static_cast<int>(graph.limbs.size());
  for (int i = 0; i < n; ++i) {
    const AxisRect a = graph.limbs[i].rect();
    for (int j = i + 1; j < n; ++j) {
      const AxisRect b = graph.limbs[j].rect();
      if (geometry::rect_overlap_area(a, b) > 0) {
        const AxisRect region{{std::max(a.min.x, b.min.x), std::max(a.min.y, b.min.y)},
                              {std::min(a.max.x, b.max.x), std::min(a.max.y, b.max.y)}};
        graph.junctions.push_back({region, {i, j}});
      }
    }
  }
}

void validate(const LayoutGraph& graph, const std::vector<Length>& standard_thicknesses) {
  const auto n = static_cast<int>(graph.limbs.size());
  for (int i = 0; i < n; ++i) {
    const WallLimb& l = graph.limbs[i];
    const std::string id = "limb " + std::to_string(i);
    if (l.start.x != l.end.x && l.start.y != l.end.y) {
      fail(ErrorCode::InvalidGeometry, id + " is not axis aligned");
    }
    if (l.length() <= 0) fail(ErrorCode::InvalidGeometry, id + " has non-positive length");
    if (std::find(standard_thicknesses.begin(), standard_thicknesses.end(), l.thickness) ==
        standard_thicknesses.end()) {
      fail(ErrorCode::InvalidGeometry,
           id + " thickness " + std::to_string(l.thickness) + " mm is not a standard thickness");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const WallLimb& a = graph.limbs[i];
      const WallLimb& b = graph.limbs[j];
      if (a.axis() != b.axis()) continue;
      const AxisRect ra = a.rect();
      const AxisRect rb = b.rect();
      if (geometry::rect_overlap_area(ra, rb) == 0) continue;
      const Length along = a.axis() == Axis::X
                               ? std::min(ra.max.x, rb.max.x) - std::max(ra.min.x, rb.min.x)
                               : std::min(ra.max.y, rb.max.y) - std::max(ra.min.y, rb.min.y);
      if (along > std::max(a.thickness, b.thickness)) {
        fail(ErrorCode::InvalidGeometry, "limbs " + std::to_string(i) + " and " +
                                             std::to_string(j) + " overlap along their axis");
      }
    }
  }
  for (const auto& j : graph.junctions) {
    if (j.limbs.size() < 2) fail(ErrorCode::InvalidGeometry, "junction with fewer than two limbs");
    for (int idx : j.limbs) {
      if (idx < 0 || idx >= n) fail(ErrorCode::InvalidGeometry, "junction references unknown limb");
    }
  }
}

namespace {

auto limb_key(const WallLimb& l) {
  return std::tuple{l.start.x, l.start.y, l.end.x, l.end.y, l.thickness};
}

auto column_key(const ColumnBlob& c) { return std::tuple{c.bounds, c.parts}; }

}  // namespace

bool same_geometry(const LayoutGraph& a, const LayoutGraph& b) {
  if (a.limbs.size() != b.limbs.size() || a.columns.size() != b.columns.size()) return false;
  auto sorted_limbs = [](const LayoutGraph& g) {
    std::vector<decltype(limb_key(g.limbs[0]))> keys;
    for (const auto& l : g.limbs) keys.push_back(limb_key(l));
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  auto sorted_columns = [](const LayoutGraph& g) {
    std::vector<std::tuple<AxisRect, std::vector<AxisRect>>> keys;
    for (auto c : g.columns) {
      std::sort(c.parts.begin(), c.parts.end());
      keys.push_back(column_key(c));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  return sorted_limbs(a) == sorted_limbs(b) && sorted_columns(a) == sorted_columns(b);
}

LayoutGraph translated(const LayoutGraph& graph, Length dx, Length dy) {
  LayoutGraph out = graph;
  for (auto& l : out.limbs) {
    l.start = {l.start.x + dx, l.start.y + dy};
    l.end = {l.end.x + dx, l.end.y + dy};
  }
  for (auto& j : out.junctions) j.region = geometry::translated(j.region, dx, dy);
  for (auto& c : out.columns) {
    c.bounds = geometry::translated(c.bounds, dx, dy);
    for (auto& p : c.parts) p = geometry::translated(p, dx, dy);
  }
  return out;
}

LayoutGraph rotated90(const LayoutGraph& graph) {
  auto rot = [](Point2 p) { return Point2{-p.y, p.x}; };
  auto rot_rect = [](const AxisRect& r) {
    return AxisRect{{-r.max.y, r.min.x}, {-r.min.y, r.max.x}};
  };
  LayoutGraph out = graph;
  for (auto& l : out.limbs) {
    Point2 a = rot(l.start);
    Point2 b = rot(l.end);
    if (b < a) std::swap(a, b);
    l.start = a;
    l.end = b;
  }
  for (auto& c : out.columns) {
    c.bounds = rot_rect(c.bounds);
    for (auto& p : c.parts) p = rot_rect(p);
  }
  recompute_junctions(out);
  return out;
}

std::vector<AxisRect> shear_rects(const LayoutGraph& graph) {
  std::vector<AxisRect> rects;
  for (const auto& l : graph.limbs) rects.push_back(l.rect());
  for (const auto& c : graph.columns) rects.insert(rects.end(), c.parts.begin(), c.parts.end());
  return rects;
}

namespace {

nlohmann::json rect_json(const AxisRect& r) { return {r.min.x, r.min.y, r.max.x, r.max.y}; }

AxisRect rect_from(const nlohmann::json& j) {
  return AxisRect{{j.at(0).get<Length>(), j.at(1).get<Length>()},
                  {j.at(2).get<Length>(), j.at(3).get<Length>()}};
}

}  // namespace

void to_json(nlohmann::json& j, const WallLimb& l) {
  j = nlohmann::json{{"start", {l.start.x, l.start.y}},
                     {"end", {l.end.x, l.end.y}},
                     {"thickness", l.thickness},
                     {"component", l.component_id}};
}

void from_json(const nlohmann::json& j, WallLimb& l) {
  Point2 a{j.at("start").at(0).get<Length>(), j.at("start").at(1).get<Length>()};
  Point2 b{j.at("end").at(0).get<Length>(), j.at("end").at(1).get<Length>()};
  if (b < a) std::swap(a, b);
  l.start = a;
  l.end = b;
  l.thickness = j.at("thickness").get<Length>();
  l.component_id = j.value("component", 0);
}

void to_json(nlohmann::json& j, const LayoutGraph& g) {
  nlohmann::json junctions = nlohmann::json::array();
  for (const auto& jn : g.junctions) {
    junctions.push_back({{"region", rect_json(jn.region)}, {"limbs", jn.limbs}});
  }
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& c : g.columns) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : c.parts) parts.push_back(rect_json(p));
    columns.push_back({{"shape", c.shape == ColumnShape::Rectangular ? "Rectangular" : "Irregular"},
                       {"bounds", rect_json(c.bounds)},
                       {"parts", parts},
                       {"limb_ratios", c.limb_ratios},
                       {"component", c.component_id}});
  }
  j = nlohmann::json{{"units", "mm"},
                     {"scale_mm_per_px", g.scale},
                     {"source", g.source},
                     {"limbs", g.limbs},
                     {"junctions", junctions},
                     {"columns", columns}};
}

void from_json(const nlohmann::json& j, LayoutGraph& g) {
  g = LayoutGraph{};
  g.scale = j.value("scale_mm_per_px", Length{100});
  g.source = j.value("source", std::string{});
  g.limbs = j.at("limbs").get<std::vector<WallLimb>>();
  for (const auto& jn : j.value("junctions", nlohmann::json::array())) {
    g.junctions.push_back({rect_from(jn.at("region")), jn.at("limbs").get<std::vector<int>>()});
  }
  for (const auto& c : j.value("columns", nlohmann::json::array())) {
    ColumnBlob blob;
    blob.shape = c.at("shape").get<std::string>() == "Irregular" ? ColumnShape::Irregular
                                                                 : ColumnShape::Rectangular;
    blob.bounds = rect_from(c.at("bounds"));
    for (const auto& p : c.at("parts")) blob.parts.push_back(rect_from(p));
    blob.limb_ratios = c.at("limb_ratios").get<std::vector<double>>();
    blob.component_id = c.value("component", 0);
    g.columns.push_back(std::move(blob));
  }
}

}  // namespace wallforge::layout
