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

#include <string>

#include "doctest.h"
#include "wallforge/error.hpp"
#include "wallforge/plan.hpp"
#include "wallforge/util.hpp"

using namespace wallforge;
using namespace wallforge::plan;

namespace {

std::string fixture(const char* name) { return util::read_file(std::string(WF_FIXTURES) + "/" + name); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{0};
}

std::string line_dxf(const char* layer, double x0, double y0, double x1, double y1) {
  return "0\nSECTION\n2\nENTITIES\n0\nLINE\n5\nA1\n8\n" + std::string(layer) + "\n10\n" +
         std::to_string(x0) + "\n20\n" + std::to_string(y0) + "\n11\n" + std::to_string(x1) +
         "\n21\n" + std::to_string(y1) + "\n0\nENDSEC\n0\nEOF\n";
}

IngestConfig wall_config() { return parse_ingest_config("layers.WALL = ArchWall\n"); }

}  // namespace

TEST_CASE("parse_dxf: hand-built fixture") {
  const DxfDocument doc = parse_dxf(fixture("plan_small.dxf"));
  CHECK(doc.entities.size() == 8);
  CHECK(doc.layers == std::vector<std::string>{"WALL"});
  CHECK(doc.version == "AC1015");
  for (const auto& e : doc.entities) {
    CHECK(e.kind == DxfEntityKind::Line);
    CHECK(e.layer == "WALL");
  }
  CHECK(doc.entities[1].vertices == std::vector<DxfVertex>{{12000, 0}, {12000, 8000}});
}

TEST_CASE("parse_dxf: edge cases and errors") {
  CHECK(parse_dxf("0\nSECTION\n2\nHEADER\n0\nENDSEC\n0\nEOF\n").entities.empty());
  CHECK(parse_dxf("0\nEOF\n").entities.empty());

  const std::string full = fixture("plan_small.dxf");
  CHECK(code_of([&] { parse_dxf(full.substr(0, full.size() / 2)); }) == ErrorCode::MalformedDxf);
  CHECK(code_of([&] { parse_dxf(full.substr(0, full.rfind("0\nEOF"))); }) == ErrorCode::MalformedDxf);
  CHECK(code_of([] { parse_dxf("0\nSECTION\n2\n"); }) == ErrorCode::MalformedDxf);
  CHECK(code_of([] { parse_dxf("zero\nSECTION\n0\nEOF\n"); }) == ErrorCode::MalformedDxf);
  CHECK(code_of([] { parse_dxf("AutoCAD Binary DXF\r\n\x1a"); }) == ErrorCode::UnsupportedVersion);
  CHECK(code_of([] { parse_dxf("0\nSECTION\n2\nHEADER\n9\n$ACADVER\n1\nAC1006\n0\nENDSEC\n0\nEOF\n"); }) ==
        ErrorCode::UnsupportedVersion);
  CHECK(code_of([] {
          parse_dxf("0\nSECTION\n2\nENTITIES\n0\nLWPOLYLINE\n90\n3\n10\n0\n20\n0\n0\nENDSEC\n0\nEOF\n");
        }) == ErrorCode::MalformedDxf);
}

TEST_CASE("parse_dxf: unsupported entities are counted and skipped") {
  const DxfDocument doc = parse_dxf(fixture("plan_full.dxf"));
  CHECK(doc.entities.size() == 14);
  CHECK(doc.skipped.at("CIRCLE") == 1);
  CHECK(doc.skipped.at("TEXT") == 1);
  CHECK(doc.layers.size() == 5);
}

TEST_CASE("parse -> write -> parse is a fixpoint") {
  for (const char* name : {"plan_small.dxf", "plan_full.dxf"}) {
    const DxfDocument a = parse_dxf(fixture(name));
    const DxfDocument b = parse_dxf(write_dxf(a));
    CHECK(a.entities == b.entities);
    CHECK(a.layers == b.layers);
    CHECK(write_dxf(a) == write_dxf(b));
  }
  DxfDocument odd;
  odd.entities.push_back({DxfEntityKind::LwPolyline, "7", "X", {{0.1, 1e-7}, {123456.789, -0.3}, {5, 5}}, true});
  CHECK(parse_dxf(write_dxf(odd)).entities == odd.entities);
}

TEST_CASE("layer map: first glob wins, case-insensitive") {
  const IngestConfig c = parse_ingest_config(fixture("layers.cfg"));
  CHECK(c.layers.classify("A-WALL") == SemanticClass::ArchWall);
  CHECK(c.layers.classify("s-shear-core") == SemanticClass::ShearWall);
  CHECK(c.layers.classify("A-DOOR") == SemanticClass::Opening);
  CHECK(c.layers.classify("A-OUTLINE") == SemanticClass::Outline);
  CHECK_FALSE(c.layers.classify("FURNITURE").has_value());
  CHECK(c.story.num_stories == 18);
  CHECK(c.story.seismic_label == "Shear Wall Layout");

  const IngestConfig first = parse_ingest_config("layers.A-* = ArchWall\nlayers.A-WALL = Ignore\n");
  CHECK(first.layers.classify("A-WALL") == SemanticClass::ArchWall);

  CHECK(code_of([] { parse_ingest_config("layers.X = Roof\n"); }) == ErrorCode::InvalidLayerMap);
  CHECK(code_of([] { parse_ingest_config("nonsense\n"); }) == ErrorCode::InvalidLayerMap);
  CHECK(code_of([] { parse_ingest_config("bogus.key = 1\n"); }) == ErrorCode::InvalidLayerMap);
}

TEST_CASE("apply_layer_map: 8 walls, derived outline") {
  const IngestResult r = apply_layer_map(parse_dxf(fixture("plan_small.dxf")), wall_config());
  CHECK(r.plan.arch_walls.size() == 8);
  CHECK(r.plan.outline.closed);
  CHECK(r.plan.outline.vertices.size() == 4);
  // 200 mm walls inflated past each end.
  CHECK(r.plan.arch_walls[0] == geometry::make_rect(-100, -100, 12100, 100));
  CHECK(r.plan.extent() == geometry::make_rect(-100, -100, 12100, 8100));
}

TEST_CASE("apply_layer_map: full fixture") {
  const IngestConfig c = parse_ingest_config(fixture("layers.cfg"));
  const IngestResult r = apply_layer_map(parse_dxf(fixture("plan_full.dxf")), c);
  CHECK(r.plan.arch_walls.size() == 8);
  CHECK(r.plan.shear_walls.size() == 4);
  CHECK(r.plan.openings.size() == 1);
  CHECK(r.plan.outline.vertices.size() == 4);
  CHECK(r.ignored_entities == 0);
  CHECK(r.unmatched_entities == 0);
  CHECK(r.plan.extent() == geometry::make_rect(-500, -500, 12500, 8500));
}

TEST_CASE("apply_layer_map: errors") {
  const auto skew = parse_dxf(line_dxf("WALL", 0, 0, 1000, 1000));
  try {
    apply_layer_map(skew, wall_config());
    FAIL("expected NonOrthogonalWall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonOrthogonalWall);
    CHECK(std::string(e.what()).find("A1") != std::string::npos);
  }
  // Sub-degree drafting noise is accepted.
  CHECK(apply_layer_map(parse_dxf(line_dxf("WALL", 0, 0, 10000, 50)), wall_config()).plan.arch_walls.size() == 1);

  const IngestConfig ignore_all = parse_ingest_config("layers.NOTHING = ArchWall\nlayers.* = Ignore\n");
  CHECK(code_of([&] { apply_layer_map(parse_dxf(fixture("plan_small.dxf")), ignore_all); }) ==
        ErrorCode::NoOutline);

  IngestConfig small = wall_config();
  small.max_extent = 5000;
  CHECK(code_of([&] { apply_layer_map(parse_dxf(fixture("plan_small.dxf")), small); }) ==
        ErrorCode::PlanTooLarge);
}

TEST_CASE("normalize_plan") {
  FloorPlan p;
  p.outline = {{{0, 0}, {6000, 0}, {6000, 4000}, {0, 4000}}, true};
  p.arch_walls = {geometry::make_rect(0, 0, 6000, 200), geometry::make_rect(0, 0, 200, 4000)};
  p.shear_walls = {geometry::make_rect(1000, 0, 2000, 200)};

  const FloorPlan base = normalize_plan(p);
  CHECK(normalize_plan(base) == base);

  FloorPlan moved = p;
  auto shift = [](geometry::AxisRect& r) { r = geometry::translated(r, 12345, -500); };
  for (auto& v : moved.outline.vertices) v = {v.x + 12345, v.y - 500};
  for (auto& r : moved.arch_walls) shift(r);
  for (auto& r : moved.shear_walls) shift(r);
  CHECK(normalize_plan(moved) == base);

  FloorPlan off = p;
  off.arch_walls.push_back(geometry::make_rect(149, 1000, 349, 3000));
  const FloorPlan snapped = normalize_plan(off);
  CHECK(snapped.arch_walls.back() == geometry::make_rect(150, 1000, 350, 3000));

  FloorPlan sliver = p;
  sliver.openings.push_back(geometry::make_rect(1000, 1000, 1010, 1200));
  CHECK(normalize_plan(sliver).openings.empty());
}

TEST_CASE("ingest end to end and plan.json round trip") {
  const FloorPlan plan = ingest(fixture("plan_full.dxf"), parse_ingest_config(fixture("layers.cfg")));
  CHECK(plan.extent().min == geometry::Point2{0, 0});
  nlohmann::json j = plan;
  CHECK(j.at("units") == "mm");
  const FloorPlan back = j.get<FloorPlan>();
  CHECK(back == plan);
  CHECK(nlohmann::json::parse(j.dump()).get<FloorPlan>() == plan);
}
