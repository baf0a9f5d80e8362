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

#include "wallforge/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cstring>
#include <memory>

#include "wallforge/error.hpp"

namespace wallforge::raster {

namespace {

Length ceil_div(Length a, Length b) {
  Length q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

int clamp_index(Length v, int limit) {
  return static_cast<int>(std::clamp<Length>(v, 0, limit));
}

}  // namespace

std::string_view to_string(PaletteClass c) {
  switch (c) {
    case PaletteClass::Background: return "Background";
    case PaletteClass::ArchWall: return "ArchWall";
    case PaletteClass::Opening: return "Opening";
    case PaletteClass::ShearWall: return "ShearWall";
  }
  return "Background";
}

AxisRect RasterFrame::pixel_rect(int col, int row) const {
  const Length x0 = origin_x + static_cast<Length>(col) * scale;
  const Length y0 = origin_y + static_cast<Length>(height - 1 - row) * scale;
  return AxisRect{{x0, y0}, {x0 + scale, y0 + scale}};
}

std::pair<int, int> RasterFrame::column_span(const AxisRect& rect) const {
  // pixel c is inside iff min <= origin + (c + 1/2) * scale < max
  const Length begin = ceil_div(2 * (rect.min.x - origin_x) - scale, 2 * scale);
  const Length end = ceil_div(2 * (rect.max.x - origin_x) - scale, 2 * scale);
  return {clamp_index(begin, width), clamp_index(end, width)};
}

std::pair<int, int> RasterFrame::row_span(const AxisRect& rect) const {
  const Length j_begin = ceil_div(2 * (rect.min.y - origin_y) - scale, 2 * scale);
  const Length j_end = ceil_div(2 * (rect.max.y - origin_y) - scale, 2 * scale);
  // plan row j (counted from the bottom) is image row height-1-j
  const Length r_begin = static_cast<Length>(height) - j_end;
  const Length r_end = static_cast<Length>(height) - j_begin;
  return {clamp_index(r_begin, height), clamp_index(r_end, height)};
}

RasterFrame frame_for_extent(const AxisRect& extent, int canvas, Length scale) {
  if (canvas <= 0 || scale <= 0) fail(ErrorCode::InvalidArgument, "canvas and scale must be positive");
  const Length w_px = ceil_div(extent.width(), scale);
  const Length h_px = ceil_div(extent.height(), scale);
  if (w_px > canvas || h_px > canvas) {
    fail(ErrorCode::PlanTooLarge, "plan needs " + std::to_string(w_px) + " x " +
                                      std::to_string(h_px) + " px at " + std::to_string(scale) +
                                      " mm/px; canvas is " + std::to_string(canvas));
  }
  RasterFrame f;
  f.width = canvas;
  f.height = canvas;
  f.scale = scale;
  f.origin_x = extent.min.x - (canvas - w_px) / 2 * scale;
  f.origin_y = extent.min.y - (canvas - h_px) / 2 * scale;
  return f;
}

std::size_t SemanticRaster::count(PaletteClass c) const {
  return static_cast<std::size_t>(std::count(pixels.begin(), pixels.end(), c));
}

void paint(SemanticRaster& raster, const AxisRect& rect, PaletteClass cls) {
  const auto [c0, c1] = raster.frame.column_span(rect);
  const auto [r0, r1] = raster.frame.row_span(rect);
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      if (static_cast<int>(raster.at(c, r)) <= static_cast<int>(cls)) raster.set(c, r, cls);
    }
  }
}

SemanticRaster rasterize_plan(const plan::FloorPlan& plan, bool include_shear, int canvas,
                              Length scale) {
  SemanticRaster raster(frame_for_extent(plan.extent(), canvas, scale));
  for (const auto& r : plan.arch_walls) paint(raster, r, PaletteClass::ArchWall);
  for (const auto& r : plan.openings) paint(raster, r, PaletteClass::Opening);
  if (include_shear) {
    for (const auto& r : plan.shear_walls) paint(raster, r, PaletteClass::ShearWall);
  }
  return raster;
}

RgbImage to_rgb(const SemanticRaster& raster) {
  RgbImage img{raster.width(), raster.height(), {}};
  img.data.resize(static_cast<std::size_t>(img.width) * img.height * 3);
  for (std::size_t i = 0; i < raster.pixels.size(); ++i) {
    const Rgb c = color_of(raster.pixels[i]);
    img.data[3 * i] = c.r;
    img.data[3 * i + 1] = c.g;
    img.data[3 * i + 2] = c.b;
  }
  return img;
}

SemanticRaster from_rgb_exact(const RgbImage& image, const RasterFrame& frame) {
  if (image.width != frame.width || image.height != frame.height) {
    fail(ErrorCode::DimensionMismatch, "image is " + std::to_string(image.width) + "x" +
                                           std::to_string(image.height) + ", frame expects " +
                                           std::to_string(frame.width) + "x" +
                                           std::to_string(frame.height));
  }
  SemanticRaster raster(frame);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) {
      const Rgb px = image.at(c, r);
      const auto it = std::find(kPalette.begin(), kPalette.end(), px);
      if (it == kPalette.end()) {
        fail(ErrorCode::DecodeFailure, "off-palette pixel at (" + std::to_string(c) + ", " +
                                           std::to_string(r) + ")");
      }
      raster.set(c, r, static_cast<PaletteClass>(it - kPalette.begin()));
    }
  }
  return raster;
}

std::string encode_png(const RgbImage& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.data.size() != static_cast<std::size_t>(image.width) * image.height * 3) {
    fail(ErrorCode::InvalidArgument, "RGB buffer does not match its dimensions");
  }
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(png, size, 0, image.data.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    fail(ErrorCode::IoFailure, "PNG size query failed: " + msg);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, image.data.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    fail(ErrorCode::IoFailure, "PNG encode failed: " + msg);
  }
  out.resize(size);
  return out;
}

RgbImage decode_png(std::string_view bytes) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    const std::string msg = png.message;
    png_image_free(&png);
    fail(ErrorCode::DecodeFailure, "not a PNG: " + msg);
  }
  png.format = PNG_FORMAT_RGB;
  RgbImage img{static_cast<int>(png.width), static_cast<int>(png.height), {}};
  img.data.resize(PNG_IMAGE_SIZE(png));
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&png, &white, img.data.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    fail(ErrorCode::DecodeFailure, "PNG decode failed: " + msg);
  }
  return img;
}

}  // namespace wallforge::raster
