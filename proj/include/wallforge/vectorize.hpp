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

#include "wallforge/layout.hpp"
#include "wallforge/raster.hpp"

namespace wallforge::vectorize {

using geometry::AxisRect;
using geometry::Length;
using raster::PaletteClass;

/// Tolerant palette classification: nearest palette color by Euclidean RGB
/// distance; farther than 120 from every color is Background; ShearWall also
/// needs R >= 180 and G, B <= 110, otherwise the next-nearest class is used.
PaletteClass classify_pixel(raster::Rgb px);
raster::SemanticRaster classify_pixels(const raster::RgbImage& image, const raster::RasterFrame& frame);

/// Binary mask over a canvas, row-major with row 0 at the top.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}
  bool at(int c, int r) const {
    return c >= 0 && r >= 0 && c < width && r < height && bits[static_cast<std::size_t>(r) * width + c];
  }
  void set(int c, int r, bool v) { bits[static_cast<std::size_t>(r) * width + c] = v ? 1 : 0; }
  std::size_t count() const;
  bool operator==(const Mask&) const = default;
};

Mask class_mask(const raster::SemanticRaster& raster, PaletteClass cls);

/// Drops pixels with at most one 4-neighbor in the mask, then applies a 3x3
/// morphological closing. Leaves clean walls of thickness >= 2 px untouched.
Mask denoise(const Mask& mask);

/// Half-open pixel rect [c0, c1) x [r0, r1).
struct PixelRect {
  int c0 = 0, r0 = 0, c1 = 0, r1 = 0;
  int width() const { return c1 - c0; }
  int height() const { return r1 - r0; }
  auto operator<=>(const PixelRect&) const = default;
};

struct PixelComponent {
  std::vector<std::pair<int, int>> pixels;  // (col, row) in scan order
  PixelRect bounds;
};

struct Components {
  std::vector<PixelComponent> components;  // ordered by first pixel in scan order
  int noise_count = 0;                     // components dropped below min_area
};

/// 4-connected components; components smaller than `min_area` are dropped.
Components extract_components(const Mask& mask, int min_area = 4);
Components extract_components(const raster::SemanticRaster& raster, PaletteClass cls,
                              int min_area = 4);

/// Pixel-space cover of a component: greedy row-run (and column-run) merge,
/// each piece extended along its long axis as far as the component allows,
/// contained pieces dropped. The union equals the component's pixel set.
std::vector<PixelRect> cover_component(const PixelComponent& component);

struct VectorizeOptions {
  int min_area = 4;
  bool denoise = true;
  std::vector<Length> standard_thicknesses = layout::kStandardThicknesses;
  layout::LimbThresholds thresholds;
  /// Along-axis gap closed by collinear merging; <= 0 means one pixel.
  Length gap_tol = 0;
};

AxisRect to_plan_rect(const PixelRect& r, const raster::RasterFrame& frame);

/// Component -> plan rects. Components made only of column-proportioned
/// pieces are returned unsnapped; otherwise every piece is thickness-snapped
/// to the standard set and collinear pieces are gap-merged.
std::vector<AxisRect> decompose_component(const PixelComponent& component,
                                          const raster::RasterFrame& frame,
                                          const VectorizeOptions& options = {});

layout::LayoutGraph build_layout_graph(const std::vector<std::vector<AxisRect>>& per_component,
                                       Length scale, const VectorizeOptions& options = {});

struct VectorizeResult {
  layout::LayoutGraph graph;
  int noise_components = 0;
};

VectorizeResult vectorize(const raster::SemanticRaster& raster, const std::string& source,
                          const VectorizeOptions& options = {});

}  // namespace wallforge::vectorize
