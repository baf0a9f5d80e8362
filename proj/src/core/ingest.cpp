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

#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "wallforge/error.hpp"
#include "wallforge/plan.hpp"

namespace wallforge::plan {

namespace {

constexpr double kMaxSkewDegrees = 1.0;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Length parse_length(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string text(value);
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidLayerMap,
         "config key '" + std::string(key) + "': expected integer, got '" + std::string(value) + "'");
  }
}

Length round_mm(double v) { return static_cast<Length>(std::llround(v)); }

// Centerline segment -> wall rect; extends thickness/2 past both ends so that
// walls meeting at a corner close it.
AxisRect inflate_segment(const DxfVertex& a, const DxfVertex& b, Length thickness,
                         const std::string& entity_id) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double major = std::max(std::abs(dx), std::abs(dy));
  const double minor = std::min(std::abs(dx), std::abs(dy));
  const double skew = std::atan2(minor, major) * 180.0 / std::numbers::pi;
  if (skew > kMaxSkewDegrees) {
    fail(ErrorCode::NonOrthogonalWall,
         "entity " + entity_id + " deviates " + std::to_string(skew) + " degrees from the axes");
  }
  const Length lo_half = thickness / 2;
  const Length hi_half = thickness - lo_half;
  if (std::abs(dx) >= std::abs(dy)) {
    const Length y = round_mm((a.y + b.y) / 2.0);
    const Length x0 = round_mm(std::min(a.x, b.x));
    const Length x1 = round_mm(std::max(a.x, b.x));
    return AxisRect{{x0 - lo_half, y - lo_half}, {x1 + hi_half, y + hi_half}};
  }
  const Length x = round_mm((a.x + b.x) / 2.0);
  const Length y0 = round_mm(std::min(a.y, b.y));
  const Length y1 = round_mm(std::max(a.y, b.y));
  return AxisRect{{x - lo_half, y0 - lo_half}, {x + hi_half, y1 + hi_half}};
}

void append_segments(const DxfEntity& e, Length thickness, std::vector<AxisRect>& out) {
  const auto& v = e.vertices;
  const std::size_t n = v.size();
  const std::size_t segments = e.closed ? n : (n == 0 ? 0 : n - 1);
  for (std::size_t i = 0; i < segments; ++i) {
    const DxfVertex& a = v[i];
    const DxfVertex& b = v[(i + 1) % n];
    if (round_mm(a.x) == round_mm(b.x) && round_mm(a.y) == round_mm(b.y)) continue;
    out.push_back(inflate_segment(a, b, thickness, e.handle));
  }
}

Polyline to_polyline(const DxfEntity& e) {
  Polyline line;
  line.closed = e.closed;
  for (const auto& v : e.vertices) {
    const Point2 p{round_mm(v.x), round_mm(v.y)};
    if (line.vertices.empty() || line.vertices.back() != p) line.vertices.push_back(p);
  }
  if (line.closed && line.vertices.size() > 1 && line.vertices.front() == line.vertices.back()) {
    line.vertices.pop_back();
  }
  return line;
}

Polyline rect_outline(const AxisRect& r) {
  return Polyline{{r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}}, true};
}

void snap_rects(std::vector<AxisRect>& rects, Length dx, Length dy) {
  std::vector<AxisRect> kept;
  kept.reserve(rects.size());
  for (const auto& r : rects) {
    AxisRect s{geometry::snap_to_grid(Point2{r.min.x + dx, r.min.y + dy}, kNormalizeGrid),
               geometry::snap_to_grid(Point2{r.max.x + dx, r.max.y + dy}, kNormalizeGrid)};
    if (s.valid()) kept.push_back(s);
  }
  rects = std::move(kept);
}

}  // namespace

std::string_view to_string(SemanticClass c) {
  switch (c) {
    case SemanticClass::ArchWall: return "ArchWall";
    case SemanticClass::ShearWall: return "ShearWall";
    case SemanticClass::Opening: return "Opening";
    case SemanticClass::Outline: return "Outline";
    case SemanticClass::Ignore: return "Ignore";
  }
  return "Ignore";
}

SemanticClass semantic_class_from_string(std::string_view name) {
  const std::string n = lower(trim(name));
  if (n == "archwall") return SemanticClass::ArchWall;
  if (n == "shearwall") return SemanticClass::ShearWall;
  if (n == "opening") return SemanticClass::Opening;
  if (n == "outline") return SemanticClass::Outline;
  if (n == "ignore") return SemanticClass::Ignore;
  fail(ErrorCode::InvalidLayerMap, "unknown semantic class '" + std::string(name) + "'");
}

std::optional<SemanticClass> LayerMap::classify(std::string_view layer) const {
  const std::string name(layer);
  for (const auto& [pattern, cls] : entries) {
    if (::fnmatch(pattern.c_str(), name.c_str(), FNM_CASEFOLD) == 0) return cls;
  }
  return std::nullopt;
}

void LayerMap::validate() const {
  const bool has_arch = std::any_of(entries.begin(), entries.end(), [](const auto& e) {
    return e.second == SemanticClass::ArchWall;
  });
  if (!has_arch) fail(ErrorCode::InvalidLayerMap, "layer map needs at least one ArchWall pattern");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[i].first == entries[j].first) {
        fail(ErrorCode::InvalidLayerMap, "pattern '" + entries[i].first + "' mapped twice");
      }
    }
  }
}

void StoryMeta::validate() const {
  if (story_height < 2400 || story_height > 6000) {
    fail(ErrorCode::InvalidArgument, "story height must lie in [2400, 6000] mm");
  }
  if (num_stories < 1) fail(ErrorCode::InvalidArgument, "need at least one story");
}

IngestConfig parse_ingest_config(std::string_view text) {
  IngestConfig config;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::InvalidLayerMap, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key.starts_with("layers.")) {
      const std::string pattern(key.substr(7));
      if (pattern.empty()) fail(ErrorCode::InvalidLayerMap, "empty layer pattern");
      config.layers.entries.emplace_back(pattern, semantic_class_from_string(value));
    } else if (key.starts_with("thickness.")) {
      const SemanticClass cls = semantic_class_from_string(key.substr(10));
      const Length t = parse_length(key, value);
      if (t <= 0) fail(ErrorCode::InvalidLayerMap, "thickness must be positive");
      switch (cls) {
        case SemanticClass::ArchWall: config.arch_wall_thickness = t; break;
        case SemanticClass::ShearWall: config.shear_wall_thickness = t; break;
        case SemanticClass::Opening: config.opening_thickness = t; break;
        default: fail(ErrorCode::InvalidLayerMap, "no thickness for class " + std::string(key));
      }
    } else if (key == "story.height") {
      config.story.story_height = parse_length(key, value);
    } else if (key == "story.count") {
      config.story.num_stories = static_cast<int>(parse_length(key, value));
    } else if (key == "story.label") {
      config.story.seismic_label = std::string(value);
    } else if (key == "plan.max_extent") {
      config.max_extent = parse_length(key, value);
    } else {
      fail(ErrorCode::InvalidLayerMap, "unknown config key '" + std::string(key) + "'");
    }
  }
  config.layers.validate();
  config.story.validate();
  return config;
}

AxisRect FloorPlan::extent() const {
  std::vector<AxisRect> all;
  if (!outline.vertices.empty()) all.push_back(geometry::bounding_box(outline));
  all.insert(all.end(), arch_walls.begin(), arch_walls.end());
  all.insert(all.end(), openings.begin(), openings.end());
  all.insert(all.end(), shear_walls.begin(), shear_walls.end());
  return geometry::bounding_box(all);
}

IngestResult apply_layer_map(const DxfDocument& doc, const IngestConfig& config) {
  config.layers.validate();
  IngestResult result;
  FloorPlan& plan = result.plan;
  plan.story = config.story;

  std::optional<Polyline> outline;
  geometry::Area outline_area = -1;

  for (const DxfEntity& e : doc.entities) {
    const auto cls = config.layers.classify(e.layer);
    if (!cls) {
      ++result.unmatched_entities;
      continue;
    }
    switch (*cls) {
      case SemanticClass::Ignore:
        ++result.ignored_entities;
        break;
      case SemanticClass::ArchWall:
        append_segments(e, config.arch_wall_thickness, plan.arch_walls);
        break;
      case SemanticClass::ShearWall:
        append_segments(e, config.shear_wall_thickness, plan.shear_walls);
        break;
      case SemanticClass::Opening:
        if (e.closed && e.vertices.size() >= 3) {
          const AxisRect box = geometry::bounding_box(to_polyline(e));
          if (box.valid()) plan.openings.push_back(box);
        } else {
          append_segments(e, config.opening_thickness, plan.openings);
        }
        break;
      case SemanticClass::Outline:
        if (e.kind == DxfEntityKind::LwPolyline && e.closed) {
          Polyline line = to_polyline(e);
          const AxisRect box = geometry::bounding_box(line);
          if (line.vertices.size() >= 3 && box.valid() && box.area() > outline_area) {
            outline_area = box.area();
            outline = std::move(line);
          }
        }
        break;
    }
  }

  if (outline) {
    plan.outline = std::move(*outline);
  } else {
    std::vector<AxisRect> all = plan.arch_walls;
    all.insert(all.end(), plan.openings.begin(), plan.openings.end());
    all.insert(all.end(), plan.shear_walls.begin(), plan.shear_walls.end());
    if (all.empty()) {
      fail(ErrorCode::NoOutline, "no closed outline and no geometry to derive one from");
    }
    plan.outline = rect_outline(geometry::bounding_box(all));
  }

  const AxisRect extent = plan.extent();
  if (extent.width() > config.max_extent || extent.height() > config.max_extent) {
    fail(ErrorCode::PlanTooLarge, "plan extent " + std::to_string(extent.width()) + " x " +
                                      std::to_string(extent.height()) + " mm exceeds " +
                                      std::to_string(config.max_extent) + " mm");
  }
  return result;
}

FloorPlan normalize_plan(const FloorPlan& plan) {
  const AxisRect extent = plan.extent();
  const Length dx = -extent.min.x;
  const Length dy = -extent.min.y;

  FloorPlan out;
  out.story = plan.story;
  out.outline.closed = plan.outline.closed;
  for (const auto& p : plan.outline.vertices) {
    const Point2 s = geometry::snap_to_grid(Point2{p.x + dx, p.y + dy}, kNormalizeGrid);
    if (out.outline.vertices.empty() || out.outline.vertices.back() != s) {
      out.outline.vertices.push_back(s);
    }
  }
  if (out.outline.closed && out.outline.vertices.size() > 1 &&
      out.outline.vertices.front() == out.outline.vertices.back()) {
    out.outline.vertices.pop_back();
  }
  out.arch_walls = plan.arch_walls;
  out.openings = plan.openings;
  out.shear_walls = plan.shear_walls;
  snap_rects(out.arch_walls, dx, dy);
  snap_rects(out.openings, dx, dy);
  snap_rects(out.shear_walls, dx, dy);
  return out;
}

FloorPlan ingest(std::string_view dxf_bytes, const IngestConfig& config) {
  return normalize_plan(apply_layer_map(parse_dxf(dxf_bytes), config).plan);
}

namespace {

nlohmann::json rects_json(const std::vector<AxisRect>& rects) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rects) arr.push_back({r.min.x, r.min.y, r.max.x, r.max.y});
  return arr;
}

std::vector<AxisRect> rects_from(const nlohmann::json& arr) {
  std::vector<AxisRect> out;
  for (const auto& r : arr) {
    AxisRect rect{{r.at(0).get<Length>(), r.at(1).get<Length>()},
                  {r.at(2).get<Length>(), r.at(3).get<Length>()}};
    if (!rect.valid()) fail(ErrorCode::InvalidArgument, "degenerate rect in plan.json");
    out.push_back(rect);
  }
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const FloorPlan& plan) {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& p : plan.outline.vertices) verts.push_back({p.x, p.y});
  j = nlohmann::json{
      {"units", "mm"},
      {"outline", {{"closed", plan.outline.closed}, {"vertices", verts}}},
      {"arch_walls", rects_json(plan.arch_walls)},
      {"openings", rects_json(plan.openings)},
      {"shear_walls", rects_json(plan.shear_walls)},
      {"story",
       {{"height", plan.story.story_height},
        {"count", plan.story.num_stories},
        {"label", plan.story.seismic_label}}},
  };
}

void from_json(const nlohmann::json& j, FloorPlan& plan) {
  if (j.value("units", "mm") != "mm") fail(ErrorCode::InvalidArgument, "plan.json units must be mm");
  plan = FloorPlan{};
  const auto& outline = j.at("outline");
  plan.outline.closed = outline.at("closed").get<bool>();
  for (const auto& v : outline.at("vertices")) {
    plan.outline.vertices.push_back({v.at(0).get<Length>(), v.at(1).get<Length>()});
  }
  plan.arch_walls = rects_from(j.at("arch_walls"));
  plan.openings = rects_from(j.at("openings"));
  plan.shear_walls = rects_from(j.at("shear_walls"));
  const auto& story = j.at("story");
  plan.story.story_height = story.at("height").get<Length>();
  plan.story.num_stories = story.at("count").get<int>();
  plan.story.seismic_label = story.at("label").get<std::string>();
  plan.story.validate();
}

}  // namespace wallforge::plan
