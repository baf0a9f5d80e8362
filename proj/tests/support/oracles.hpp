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

// Independent reference implementations used by the tests. Nothing here calls
// into the library routine it checks.

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "wallforge/layout.hpp"
#include "wallforge/plan.hpp"
#include "wallforge/raster.hpp"

namespace oracle {

using wallforge::geometry::AxisRect;
using wallforge::geometry::Length;
using PixelSet = std::set<std::pair<int, int>>;  // (col, row)

/// Per-pixel point-in-rect test at pixel centers, precedence applied by
/// ranking classes.
wallforge::raster::SemanticRaster brute_raster(const wallforge::plan::FloorPlan& plan,
                                               const wallforge::raster::RasterFrame& frame,
                                               bool include_shear);

/// Pixels whose centers fall in any of `rects`.
PixelSet brute_pixels(const std::vector<AxisRect>& rects, const wallforge::raster::RasterFrame& frame);

PixelSet pixels_of(const wallforge::raster::SemanticRaster& r, wallforge::raster::PaletteClass cls);

double iou(const PixelSet& a, const PixelSet& b);

/// 1 mm brute-force overlap count of two rects.
long long brute_overlap_area(const AxisRect& a, const AxisRect& b);

/// Skeleton length of the union of `rects` (mm): the union is rasterized at
/// `resolution` mm, thinned (Zhang-Suen), skeleton steps are summed, and
/// half the wall thickness is added at each free skeleton end.
double skeleton_length_mm(const std::vector<AxisRect>& rects, Length thickness, Length resolution = 10);

/// Closed-form lateral stiffness of a cantilever wall, flexure plus shear.
double wall_stiffness(double L, double t, double h, double E, double G);

/// Random 4-connected polyomino of `cells` cells inside a `box` x `box` square.
PixelSet random_polyomino(std::mt19937& rng, int cells, int box);

/// Grid-aligned synthetic shear-wall layout: bars, L, T and plus shapes and
/// compact columns, each in its own cell so components stay >= 3 px apart.
/// Rects are in plan mm for a frame at origin 0 with the given scale.
std::vector<AxisRect> random_wall_rects(std::mt19937& rng, int canvas, Length scale);

/// Random limb-only layout with limbs in both directions; coordinates are
/// multiples of 100 mm.
wallforge::layout::LayoutGraph random_layout(std::mt19937& rng, int limbs = 8);

}  // namespace oracle
