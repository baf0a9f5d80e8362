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

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wallforge/error.hpp"
#include "wallforge/geometry.hpp"

using namespace wallforge;
using namespace wallforge::geometry;

TEST_CASE("snap_to_grid rounds to the nearest multiple, ties up") {
  CHECK(snap_to_grid(Point2{149, 251}, 100) == Point2{100, 300});
  CHECK(snap_to_grid(Point2{150, 250}, 100) == Point2{200, 300});
  CHECK(snap_to_grid(Point2{0, 0}, 100) == Point2{0, 0});
  CHECK(snap_to_grid(-150, 100) == -100);
  CHECK(snap_to_grid(-151, 100) == -200);
  CHECK_THROWS_AS(snap_to_grid(5, 0), Error);
}

TEST_CASE("snap_to_grid is idempotent") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<Length> v(-100000, 100000);
  for (int i = 0; i < 5000; ++i) {
    const Length g = 1 + (v(rng) & 255);
    const Length s = snap_to_grid(v(rng), g);
    CHECK(snap_to_grid(s, g) == s);
    CHECK(s % g == 0);
  }
}

TEST_CASE("merge_collinear") {
  const std::vector<AxisRect> near{make_rect(0, 0, 600, 200), make_rect(650, 0, 1200, 200)};
  CHECK(merge_collinear(near, Axis::X, 100) == std::vector<AxisRect>{make_rect(0, 0, 1200, 200)});
  const std::vector<AxisRect> far{make_rect(0, 0, 600, 200), make_rect(800, 0, 1200, 200)};
  CHECK(merge_collinear(far, Axis::X, 100) == far);
  CHECK(merge_collinear(std::vector<AxisRect>{}, Axis::X, 100).empty());

  SUBCASE("other bands pass through") {
    const std::vector<AxisRect> mixed{make_rect(0, 0, 600, 200), make_rect(650, 0, 1200, 300)};
    CHECK(merge_collinear(mixed, Axis::X, 100).size() == 2);
  }
  SUBCASE("Y axis") {
    const std::vector<AxisRect> col{make_rect(0, 0, 200, 600), make_rect(0, 600, 200, 900)};
    CHECK(merge_collinear(col, Axis::Y, 0) == std::vector<AxisRect>{make_rect(0, 0, 200, 900)});
  }
}

TEST_CASE("merge_collinear output is stable under a second pass") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> u(0, 30);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<AxisRect> rects;
    for (int i = 0; i < 8; ++i) {
      const Length x = 100 * u(rng), band = 200 * (u(rng) % 3);
      rects.push_back(make_rect(x, band, x + 100 * (1 + u(rng) % 6), band + 200));
    }
    const auto once = merge_collinear(rects, Axis::X, 100);
    CHECK(merge_collinear(once, Axis::X, 100) == once);
    CHECK(union_area(once) >= union_area(rects));
  }
}

TEST_CASE("rect_overlap_area against a 1 mm brute-force count") {
  const AxisRect a = make_rect(0, 0, 200, 1000);
  const AxisRect b = make_rect(0, 800, 1200, 1000);
  CHECK(rect_overlap_area(a, b) == 40000);
  CHECK(oracle::brute_overlap_area(a, b) == 40000);
  CHECK(rect_overlap_area(a, make_rect(500, 500, 600, 600)) == 0);
  CHECK(rect_overlap_area(a, a) == a.area());

  std::mt19937 rng(3);
  std::uniform_int_distribution<Length> u(0, 60);
  for (int i = 0; i < 300; ++i) {
    const Length x0 = u(rng), y0 = u(rng), x1 = u(rng), y1 = u(rng);
    const AxisRect p = make_rect(x0, y0, x0 + 1 + u(rng), y0 + 1 + u(rng));
    const AxisRect q = make_rect(x1, y1, x1 + 1 + u(rng), y1 + 1 + u(rng));
    CHECK(rect_overlap_area(p, q) == oracle::brute_overlap_area(p, q));
    CHECK(rect_overlap_area(p, q) == rect_overlap_area(q, p));
  }
}

TEST_CASE("touch, containment and bounding boxes") {
  const AxisRect a = make_rect(0, 0, 100, 100);
  CHECK(rects_touch(a, make_rect(100, 0, 200, 50)));
  CHECK_FALSE(rects_touch(a, make_rect(100, 100, 200, 200)));  // corner only
  CHECK_FALSE(rects_touch(a, make_rect(150, 0, 200, 50)));
  CHECK(contains(a, make_rect(10, 10, 20, 20)));
  CHECK_FALSE(contains(make_rect(10, 10, 20, 20), a));
  const std::vector<AxisRect> rs{a, make_rect(-50, 20, 10, 300)};
  CHECK(bounding_box(rs) == make_rect(-50, 0, 100, 300));
  CHECK(translated(a, 5, -5) == make_rect(5, -5, 105, 95));
}

TEST_CASE("union_area against a pixel count") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<Length> u(0, 20);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<AxisRect> rects;
    for (int i = 0; i < 5; ++i) {
      const Length x = u(rng), y = u(rng);
      rects.push_back(make_rect(x, y, x + 1 + u(rng), y + 1 + u(rng)));
    }
    Area cells = 0;
    for (Length x = 0; x < 45; ++x) {
      for (Length y = 0; y < 45; ++y) {
        for (const auto& r : rects) {
          if (r.min.x <= x && x < r.max.x && r.min.y <= y && y < r.max.y) {
            ++cells;
            break;
          }
        }
      }
    }
    CHECK(union_area(rects) == cells);
  }
}
