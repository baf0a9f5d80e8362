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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wallforge/error.hpp"
#include "wallforge/vectorize.hpp"

using namespace wallforge;
using namespace wallforge::vectorize;
using geometry::make_rect;
using raster::PaletteClass;
using raster::Rgb;

namespace {

raster::RasterFrame frame(int size) {
  raster::RasterFrame f;
  f.width = f.height = size;
  return f;
}

raster::SemanticRaster paint_rects(const std::vector<geometry::AxisRect>& rects, int size) {
  raster::SemanticRaster r(frame(size));
  for (const auto& rect : rects) raster::paint(r, rect, PaletteClass::ShearWall);
  return r;
}

PixelComponent component_of(const oracle::PixelSet& cells) {
  PixelComponent c;
  c.bounds = {cells.begin()->first, cells.begin()->second, cells.begin()->first + 1, cells.begin()->second + 1};
  for (const auto& [x, y] : cells) {
    c.pixels.emplace_back(x, y);
    c.bounds.c0 = std::min(c.bounds.c0, x);
    c.bounds.r0 = std::min(c.bounds.r0, y);
    c.bounds.c1 = std::max(c.bounds.c1, x + 1);
    c.bounds.r1 = std::max(c.bounds.r1, y + 1);
  }
  return c;
}

oracle::PixelSet covered(const std::vector<PixelRect>& rects) {
  oracle::PixelSet s;
  for (const auto& r : rects)
    for (int y = r.r0; y < r.r1; ++y)
      for (int x = r.c0; x < r.c1; ++x) s.insert({x, y});
  return s;
}

// Nearest palette entry, skipping red unless it looks red enough.
PaletteClass brute_classify(Rgb px) {
  int best = -1;
  long best_d = 0;
  for (int i = 0; i < raster::kPaletteSize; ++i) {
    const Rgb c = raster::kPalette[i];
    if (i == 3 && !(px.r >= 180 && px.g <= 110 && px.b <= 110)) continue;
    const long d = (long(px.r) - c.r) * (long(px.r) - c.r) + (long(px.g) - c.g) * (long(px.g) - c.g) +
                   (long(px.b) - c.b) * (long(px.b) - c.b);
    if (best < 0 || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  long nearest_any = -1;
  for (const Rgb c : raster::kPalette) {
    const long d = (long(px.r) - c.r) * (long(px.r) - c.r) + (long(px.g) - c.g) * (long(px.g) - c.g) +
                   (long(px.b) - c.b) * (long(px.b) - c.b);
    if (nearest_any < 0 || d < nearest_any) nearest_any = d;
  }
  if (nearest_any > 120 * 120 || best_d > 120 * 120) return PaletteClass::Background;
  return static_cast<PaletteClass>(best);
}

}  // namespace

TEST_CASE("classify_pixel") {
  CHECK(classify_pixel({250, 10, 10}) == PaletteClass::ShearWall);
  CHECK(classify_pixel({255, 255, 250}) == PaletteClass::Background);
  CHECK(classify_pixel({200, 150, 150}) == PaletteClass::ArchWall);
  CHECK(classify_pixel({10, 160, 240}) == PaletteClass::Opening);
  std::mt19937 rng(9);
  for (int i = 0; i < 20000; ++i) {
    const Rgb px{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng())};
    CHECK(classify_pixel(px) == brute_classify(px));
  }
}

TEST_CASE("classify_pixels checks dimensions") {
  raster::RgbImage img{4, 4, std::vector<std::uint8_t>(48, 255)};
  CHECK(classify_pixels(img, frame(4)).count(PaletteClass::Background) == 16);
  CHECK_THROWS_AS(classify_pixels(img, frame(5)), Error);
}

TEST_CASE("extract_components") {
  Mask m(20, 10);
  for (int c = 0; c < 6; ++c) {
    m.set(c, 0, true);
    m.set(c, 1, true);
    m.set(c + 10, 5, true);
    m.set(c + 10, 6, true);
  }
  CHECK(extract_components(m).components.size() == 2);

  Mask l(10, 10);
  for (int i = 0; i < 6; ++i) {
    l.set(i, 0, true);
    l.set(0, i, true);
  }
  CHECK(extract_components(l).components.size() == 1);

  Mask speck = m;
  speck.set(18, 9, true);
  const Components c = extract_components(speck);
  CHECK(c.components.size() == 2);
  CHECK(c.noise_count == 1);
}

TEST_CASE("denoise keeps clean walls and removes specks") {
  const auto r = paint_rects({make_rect(500, 500, 2500, 700), make_rect(500, 500, 700, 2000)}, 40);
  const Mask clean = class_mask(r, PaletteClass::ShearWall);
  CHECK(denoise(clean) == clean);
  Mask noisy = clean;
  noisy.set(35, 35, true);
  noisy.set(30, 2, true);
  CHECK(denoise(noisy) == clean);
  Mask holed = clean;
  holed.set(10, 34, false);
  CHECK(denoise(holed) == clean);
}

TEST_CASE("decompose: straight run") {
  const auto r = paint_rects({make_rect(1000, 1000, 1600, 1200)}, 32);
  const auto comps = extract_components(r, PaletteClass::ShearWall);
  REQUIRE(comps.components.size() == 1);
  const auto rects = decompose_component(comps.components[0], r.frame);
  CHECK(rects == std::vector<geometry::AxisRect>{make_rect(1000, 1000, 1600, 1200)});
  CHECK_THROWS_AS(decompose_component(PixelComponent{}, r.frame), Error);
}

TEST_CASE("decompose: L and plus shapes cover exactly") {
  // L: 12x2 bar plus 2x10 arm sharing a corner.
  oracle::PixelSet l;
  for (int x = 0; x < 12; ++x) l.insert({x, 8}), l.insert({x, 9});
  for (int y = 0; y < 10; ++y) l.insert({0, y}), l.insert({1, y});
  const auto lc = cover_component(component_of(l));
  CHECK(lc.size() == 2);
  CHECK(covered(lc) == l);
  const auto shared = oracle::brute_overlap_area(geometry::make_rect(lc[0].c0, lc[0].r0, lc[0].c1, lc[0].r1),
                                                 geometry::make_rect(lc[1].c0, lc[1].r0, lc[1].c1, lc[1].r1));
  CHECK(shared == 4);

  oracle::PixelSet plus;
  for (int x = 0; x < 14; ++x) plus.insert({x, 6}), plus.insert({x, 7});
  for (int y = 0; y < 14; ++y) plus.insert({6, y}), plus.insert({7, y});
  const auto pc = cover_component(component_of(plus));
  CHECK(pc.size() == 2);
  CHECK(covered(pc) == plus);
}

TEST_CASE("cover_component is an exact cover of random polyominoes") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const auto cells = oracle::random_polyomino(rng, 1 + static_cast<int>(rng() % 60), 12);
    const auto rects = cover_component(component_of(cells));
    CHECK(covered(rects) == cells);
    for (const auto& r : rects) {
      for (const auto& other : rects) {
        if (&r != &other) CHECK_FALSE((r.c0 >= other.c0 && r.r0 >= other.r0 && r.c1 <= other.c1 && r.r1 <= other.r1));
      }
    }
  }
}

TEST_CASE("build_layout_graph: limbs, junctions and columns") {
  const VectorizeOptions opt;
  auto graph_of = [&](const std::vector<geometry::AxisRect>& rects) {
    return vectorize::vectorize(paint_rects(rects, 64), "test", opt).graph;
  };

  const auto bar = graph_of({make_rect(1000, 1000, 3000, 1200)});
  CHECK(bar.limbs.size() == 1);
  CHECK(bar.junctions.empty());
  CHECK(bar.limbs[0].length() == 2000);
  CHECK(bar.limbs[0].thickness == 200);

  // 600 x 200 has ratio 3 and reads as a column under the default thresholds.
  const auto stub = graph_of({make_rect(1000, 1000, 1600, 1200)});
  CHECK(stub.limbs.empty());
  CHECK(stub.columns.size() == 1);

  const auto ell = graph_of({make_rect(1000, 1000, 2200, 1200), make_rect(1000, 1000, 1200, 2000)});
  CHECK(ell.limbs.size() == 2);
  REQUIRE(ell.junctions.size() == 1);
  CHECK(ell.junctions[0].region.area() ==
        geometry::rect_overlap_area(ell.limbs[0].rect(), ell.limbs[1].rect()));
  CHECK(ell.junctions[0].region.area() == 40000);
  layout::validate(ell);

  const auto col = graph_of({make_rect(1000, 1000, 1400, 1300)});
  REQUIRE(col.columns.size() == 1);
  CHECK(col.columns[0].shape == layout::ColumnShape::Rectangular);
  CHECK(col.columns[0].bounds == make_rect(1000, 1000, 1400, 1300));
  CHECK(col.limbs.empty());

  const auto irregular = graph_of({make_rect(1000, 1000, 1600, 1200), make_rect(1000, 1000, 1200, 1500)});
  REQUIRE(irregular.columns.size() == 1);
  CHECK(irregular.columns[0].shape == layout::ColumnShape::Irregular);
}

TEST_CASE("thickness snapping recenters on the standard set") {
  // 4 px (400 mm) thick wall snaps to 300 mm.
  const auto g = vectorize::vectorize(paint_rects({make_rect(1000, 1000, 4000, 1400)}, 64), "t").graph;
  REQUIRE(g.limbs.size() == 1);
  CHECK(g.limbs[0].thickness == 300);
  CHECK(g.limbs[0].start.y == 1200);
}

TEST_CASE("clean synthetic layouts survive raster -> vector -> raster") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const auto rects = oracle::random_wall_rects(rng, 128, 100);
    const auto r = paint_rects(rects, 128);
    const auto g = vectorize::vectorize(r, "t").graph;
    layout::validate(g);
    const auto back = paint_rects(layout::shear_rects(g), 128);
    CHECK(oracle::iou(oracle::pixels_of(r, PaletteClass::ShearWall), oracle::pixels_of(back, PaletteClass::ShearWall)) ==
          1.0);
  }
}
