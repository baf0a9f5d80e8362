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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wallforge/geometry.hpp"
#include "wallforge/plan.hpp"

namespace wallforge::raster {

using geometry::AxisRect;
using geometry::Length;

enum class PaletteClass : std::uint8_t { Background = 0, ArchWall = 1, Opening = 2, ShearWall = 3 };

inline constexpr int kPaletteSize = 4;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Bit-exact palette of every PNG this library writes.
inline constexpr std::array<Rgb, kPaletteSize> kPalette{{
    {255, 255, 255},  // Background
    {127, 127, 127},  // ArchWall
    {0, 170, 255},    // Opening
    {255, 0, 0},      // ShearWall
}};

constexpr Rgb color_of(PaletteClass c) { return kPalette[static_cast<int>(c)]; }
std::string_view to_string(PaletteClass c);

inline constexpr int kDefaultCanvas = 512;
inline constexpr Length kDefaultScale = 100;  // mm per pixel

/// Placement of a canvas in plan coordinates. Column c covers
/// [origin_x + c*scale, origin_x + (c+1)*scale); row 0 is the top of the
/// image, so row r covers y in [origin_y + (height-1-r)*scale, ... + scale).
struct RasterFrame {
  int width = kDefaultCanvas;
  int height = kDefaultCanvas;
  Length scale = kDefaultScale;
  Length origin_x = 0;
  Length origin_y = 0;

  AxisRect pixel_rect(int col, int row) const;
  /// Half-open [begin, end) column / row ranges whose pixel centers lie inside
  /// `rect`, clipped to the canvas.
  std::pair<int, int> column_span(const AxisRect& rect) const;
  std::pair<int, int> row_span(const AxisRect& rect) const;
  bool operator==(const RasterFrame&) const = default;
};

/// Frame that centers `extent` on a canvas; fails with PlanTooLarge when the
/// extent needs more pixels than the canvas has.
RasterFrame frame_for_extent(const AxisRect& extent, int canvas = kDefaultCanvas,
                             Length scale = kDefaultScale);

struct SemanticRaster {
  RasterFrame frame;
  std::vector<PaletteClass> pixels;  // row-major, row 0 at top

  SemanticRaster() = default;
  explicit SemanticRaster(const RasterFrame& f)
      : frame(f),
        pixels(static_cast<std::size_t>(f.width) * static_cast<std::size_t>(f.height),
               PaletteClass::Background) {}

  int width() const { return frame.width; }
  int height() const { return frame.height; }
  PaletteClass at(int col, int row) const { return pixels[index(col, row)]; }
  void set(int col, int row, PaletteClass c) { pixels[index(col, row)] = c; }
  std::size_t count(PaletteClass c) const;

  bool operator==(const SemanticRaster&) const = default;

 private:
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(frame.width) +
           static_cast<std::size_t>(col);
  }
};

/// Paints `rect` with `cls` honoring precedence ShearWall > Opening >
/// ArchWall > Background: a pixel is only overwritten by an equal or higher
/// class.
void paint(SemanticRaster& raster, const AxisRect& rect, PaletteClass cls);

SemanticRaster rasterize_plan(const plan::FloorPlan& plan, bool include_shear,
                              int canvas = kDefaultCanvas, Length scale = kDefaultScale);

// ---------------------------------------------------------------------------
// 8-bit RGB images and PNG.

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width*height*3, row-major, top row first

  Rgb at(int col, int row) const {
    const std::size_t i = (static_cast<std::size_t>(row) * width + col) * 3;
    return {data[i], data[i + 1], data[i + 2]};
  }
  void set(int col, int row, Rgb c) {
    const std::size_t i = (static_cast<std::size_t>(row) * width + col) * 3;
    data[i] = c.r;
    data[i + 1] = c.g;
    data[i + 2] = c.b;
  }
  bool operator==(const RgbImage&) const = default;
};

RgbImage to_rgb(const SemanticRaster& raster);

/// Exact palette decode; any off-palette pixel is a DecodeFailure.
SemanticRaster from_rgb_exact(const RgbImage& image, const RasterFrame& frame);

std::string encode_png(const RgbImage& image);
/// Accepts any PNG color type; alpha is composited over white.
RgbImage decode_png(std::string_view bytes);

inline std::string encode_png(const SemanticRaster& raster) { return encode_png(to_rgb(raster)); }

}  // namespace wallforge::raster
