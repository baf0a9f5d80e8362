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

#include "wallforge/vectorize.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

#include "wallforge/error.hpp"

namespace wallforge::vectorize {

namespace {

constexpr int kMaxClassDistance2 = 120 * 120;

int distance2(raster::Rgb a, raster::Rgb b) {
  const int dr = int(a.r) - int(b.r);
  const int dg = int(a.g) - int(b.g);
  const int db = int(a.b) - int(b.b);
  return dr * dr + dg * dg + db * db;
}

bool passes_red_guard(raster::Rgb px) { return px.r >= 180 && px.g <= 110 && px.b <= 110; }

Length floor_div(Length a, Length b) {
  Length q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Length nearest_standard(Length t, const std::vector<Length>& standard) {
  Length best = standard.front();
  for (Length s : standard) {
    const Length d = std::abs(s - t);
    const Length bd = std::abs(best - t);
    if (d < bd || (d == bd && s > best)) best = s;
  }
  return best;
}

bool horizontal(const AxisRect& r) { return r.width() >= r.height(); }

double aspect(const AxisRect& r) {
  const auto lo = std::min(r.width(), r.height());
  const auto hi = std::max(r.width(), r.height());
  return static_cast<double>(hi) / static_cast<double>(lo);
}

// Recenters the thin dimension on the nearest standard thickness; a piece
// shorter than its new thickness grows to a square so its axis stays defined.
AxisRect snap_thickness(const AxisRect& r, const std::vector<Length>& standard) {
  AxisRect out = r;
  if (horizontal(r)) {
    const Length t = nearest_standard(r.height(), standard);
    out.min.y = floor_div(r.min.y + r.max.y - t, 2);
    out.max.y = out.min.y + t;
    if (out.width() < t) {
      out.min.x = floor_div(r.min.x + r.max.x - t, 2);
      out.max.x = out.min.x + t;
    }
  } else {
    const Length t = nearest_standard(r.width(), standard);
    out.min.x = floor_div(r.min.x + r.max.x - t, 2);
    out.max.x = out.min.x + t;
    if (out.height() < t) {
      out.min.y = floor_div(r.min.y + r.max.y - t, 2);
      out.max.y = out.min.y + t;
    }
  }
  return out;
}

template <typename Rect>
void drop_contained(std::vector<Rect>& rects, bool (*inside)(const Rect&, const Rect&)) {
  std::vector<Rect> kept;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < rects.size() && !covered; ++j) {
      if (i == j) continue;
      if (inside(rects[j], rects[i]) && (rects[j] != rects[i] || j < i)) covered = true;
    }
    if (!covered) kept.push_back(rects[i]);
  }
  rects = std::move(kept);
}

bool pixel_contains(const PixelRect& outer, const PixelRect& inner) {
  return outer.c0 <= inner.c0 && outer.r0 <= inner.r0 && inner.c1 <= outer.c1 && inner.r1 <= outer.r1;
}

bool plan_contains(const AxisRect& outer, const AxisRect& inner) {
  return geometry::contains(outer, inner);
}

// Greedy run merge over rows (or columns when `by_column`): a run continues
// the rect above it only when the spans match exactly.
std::vector<PixelRect> run_partition(const Mask& local, bool by_column) {
  const int outer = by_column ? local.width : local.height;
  const int inner = by_column ? local.height : local.width;
  auto at = [&](int o, int i) { return by_column ? local.at(o, i) : local.at(i, o); };

  std::vector<PixelRect> rects;
  std::map<std::pair<int, int>, std::size_t> open;
  for (int o = 0; o < outer; ++o) {
    std::map<std::pair<int, int>, std::size_t> next_open;
    int i = 0;
    while (i < inner) {
      if (!at(o, i)) {
        ++i;
        continue;
      }
      const int begin = i;
      while (i < inner && at(o, i)) ++i;
      const std::pair span{begin, i};
      if (auto it = open.find(span); it != open.end()) {
        PixelRect& r = rects[it->second];
        (by_column ? r.c1 : r.r1) = o + 1;
        next_open[span] = it->second;
      } else {
        const PixelRect r = by_column ? PixelRect{o, begin, o + 1, i} : PixelRect{begin, o, i, o + 1};
        next_open[span] = rects.size();
        rects.push_back(r);
      }
    }
    open = std::move(next_open);
  }
  return rects;
}

void extend_along_long_axis(PixelRect& r, const Mask& local) {
  auto column_full = [&](int c) {
    for (int row = r.r0; row < r.r1; ++row) {
      if (!local.at(c, row)) return false;
    }
    return true;
  };
  auto row_full = [&](int row) {
    for (int c = r.c0; c < r.c1; ++c) {
      if (!local.at(c, row)) return false;
    }
    return true;
  };
  if (r.width() >= r.height()) {
    while (column_full(r.c0 - 1)) --r.c0;
    while (column_full(r.c1)) ++r.c1;
  } else {
    while (row_full(r.r0 - 1)) --r.r0;
    while (row_full(r.r1)) ++r.r1;
  }
}

std::vector<PixelRect> extended_cover(const Mask& local, bool by_column) {
  std::vector<PixelRect> rects = run_partition(local, by_column);
  for (auto& r : rects) extend_along_long_axis(r, local);
  drop_contained(rects, &pixel_contains);
  return rects;
}

// Fewer pieces first, then the thickest thinnest piece, then the biggest piece.
bool better_cover(const std::vector<PixelRect>& a, const std::vector<PixelRect>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  auto thin = [](const std::vector<PixelRect>& v) {
    int m = std::numeric_limits<int>::max();
    for (const auto& r : v) m = std::min(m, std::min(r.width(), r.height()));
    return m;
  };
  auto biggest = [](const std::vector<PixelRect>& v) {
    int m = 0;
    for (const auto& r : v) m = std::max(m, r.width() * r.height());
    return m;
  };
  if (thin(a) != thin(b)) return thin(a) > thin(b);
  return biggest(a) > biggest(b);
}

}  // namespace

PaletteClass classify_pixel(raster::Rgb px) {
  std::array<std::pair<int, int>, raster::kPaletteSize> ranked{};
  for (int i = 0; i < raster::kPaletteSize; ++i) ranked[i] = {distance2(px, raster::kPalette[i]), i};
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  if (ranked.front().first > kMaxClassDistance2) return PaletteClass::Background;
  for (const auto& [d2, idx] : ranked) {
    const auto cls = static_cast<PaletteClass>(idx);
    if (cls == PaletteClass::ShearWall && !passes_red_guard(px)) continue;
    if (d2 > kMaxClassDistance2) return PaletteClass::Background;
    return cls;
  }
  return PaletteClass::Background;
}

raster::SemanticRaster classify_pixels(const raster::RgbImage& image, const raster::RasterFrame& frame) {
  if (image.width != frame.width || image.height != frame.height) {
    fail(ErrorCode::DimensionMismatch, "image size does not match the raster frame");
  }
  raster::SemanticRaster out(frame);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) out.set(c, r, classify_pixel(image.at(c, r)));
  }
  return out;
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Mask class_mask(const raster::SemanticRaster& raster, PaletteClass cls) {
  Mask m(raster.width(), raster.height());
  for (std::size_t i = 0; i < raster.pixels.size(); ++i) m.bits[i] = raster.pixels[i] == cls ? 1 : 0;
  return m;
}

Mask denoise(const Mask& mask) {
  Mask pruned(mask.width, mask.height);
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      if (!mask.at(c, r)) continue;
      const int n = mask.at(c - 1, r) + mask.at(c + 1, r) + mask.at(c, r - 1) + mask.at(c, r + 1);
      pruned.set(c, r, n >= 2);
    }
  }
  auto any3x3 = [](const Mask& m, int c, int r) {
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc)
        if (m.at(c + dc, r + dr)) return true;
    return false;
  };
  auto all3x3 = [](const Mask& m, int c, int r) {
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc)
        if (!m.at(c + dc, r + dr)) return false;
    return true;
  };
  Mask dilated(mask.width, mask.height);
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c) dilated.set(c, r, any3x3(pruned, c, r));
  Mask closed(mask.width, mask.height);
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c) closed.set(c, r, pruned.at(c, r) || all3x3(dilated, c, r));
  return closed;
}

Components extract_components(const Mask& mask, int min_area) {
  Components out;
  std::vector<std::uint8_t> seen(mask.bits.size(), 0);
  std::vector<std::pair<int, int>> stack;
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * mask.width + c;
      if (!mask.bits[idx] || seen[idx]) continue;
      PixelComponent comp;
      comp.bounds = {c, r, c + 1, r + 1};
      seen[idx] = 1;
      stack.assign(1, {c, r});
      while (!stack.empty()) {
        const auto [pc, pr] = stack.back();
        stack.pop_back();
        comp.pixels.emplace_back(pc, pr);
        comp.bounds.c0 = std::min(comp.bounds.c0, pc);
        comp.bounds.r0 = std::min(comp.bounds.r0, pr);
        comp.bounds.c1 = std::max(comp.bounds.c1, pc + 1);
        comp.bounds.r1 = std::max(comp.bounds.r1, pr + 1);
        constexpr std::array<std::pair<int, int>, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
        for (const auto& [dc, dr] : kSteps) {
          const int nc = pc + dc;
          const int nr = pr + dr;
          if (!mask.at(nc, nr)) continue;
          const std::size_t nidx = static_cast<std::size_t>(nr) * mask.width + nc;
          if (seen[nidx]) continue;
          seen[nidx] = 1;
          stack.emplace_back(nc, nr);
        }
      }
      std::sort(comp.pixels.begin(), comp.pixels.end(),
                [](const auto& a, const auto& b) { return std::pair{a.second, a.first} < std::pair{b.second, b.first}; });
      if (static_cast<int>(comp.pixels.size()) < min_area) {
        ++out.noise_count;
      } else {
        out.components.push_back(std::move(comp));
      }
    }
  }
  return out;
}

Components extract_components(const raster::SemanticRaster& raster, PaletteClass cls, int min_area) {
  return extract_components(class_mask(raster, cls), min_area);
}

std::vector<PixelRect> cover_component(const PixelComponent& component) {
  const PixelRect& b = component.bounds;
  Mask local(b.width(), b.height());
  for (const auto& [c, r] : component.pixels) local.set(c - b.c0, r - b.r0, true);

  std::vector<PixelRect> rows = extended_cover(local, false);
  std::vector<PixelRect> cols = extended_cover(local, true);
  std::vector<PixelRect>& chosen = better_cover(cols, rows) ? cols : rows;
  for (auto& r : chosen) {
    r.c0 += b.c0;
    r.c1 += b.c0;
    r.r0 += b.r0;
    r.r1 += b.r0;
  }
  return chosen;
}

AxisRect to_plan_rect(const PixelRect& r, const raster::RasterFrame& f) {
  return AxisRect{{f.origin_x + Length{r.c0} * f.scale, f.origin_y + Length{f.height - r.r1} * f.scale},
                  {f.origin_x + Length{r.c1} * f.scale, f.origin_y + Length{f.height - r.r0} * f.scale}};
}

std::vector<AxisRect> decompose_component(const PixelComponent& component,
                                          const raster::RasterFrame& frame,
                                          const VectorizeOptions& options) {
  if (component.pixels.empty()) fail(ErrorCode::DegenerateComponent, "empty component");
  std::vector<AxisRect> rects;
  for (const auto& pr : cover_component(component)) rects.push_back(to_plan_rect(pr, frame));

  const bool all_columns = std::all_of(rects.begin(), rects.end(), [&](const AxisRect& r) {
    return aspect(r) <= options.thresholds.column_ratio;
  });
  if (all_columns) return rects;

  std::vector<AxisRect> along_x;
  std::vector<AxisRect> along_y;
  for (const auto& r : rects) {
    const AxisRect s = snap_thickness(r, options.standard_thicknesses);
    (horizontal(r) ? along_x : along_y).push_back(s);
  }
  const Length gap = options.gap_tol > 0 ? options.gap_tol : frame.scale;
  std::vector<AxisRect> out = geometry::merge_collinear(along_x, geometry::Axis::X, gap);
  const auto merged_y = geometry::merge_collinear(along_y, geometry::Axis::Y, gap);
  out.insert(out.end(), merged_y.begin(), merged_y.end());
  drop_contained(out, &plan_contains);
  std::erase_if(out, [](const AxisRect& r) { return !r.valid(); });
  if (out.empty()) fail(ErrorCode::DegenerateComponent, "no rectangle survived thickness snapping");
  return out;
}

layout::LayoutGraph build_layout_graph(const std::vector<std::vector<AxisRect>>& per_component,
                                       Length scale, const VectorizeOptions& options) {
  layout::LayoutGraph g;
  g.scale = scale;
  for (std::size_t k = 0; k < per_component.size(); ++k) {
    const auto& rects = per_component[k];
    if (rects.empty()) continue;
    const int id = static_cast<int>(k);
    const bool all_columns = std::all_of(rects.begin(), rects.end(), [&](const AxisRect& r) {
      return aspect(r) <= options.thresholds.column_ratio;
    });
    if (all_columns) {
      layout::ColumnBlob blob;
      blob.shape = rects.size() == 1 ? layout::ColumnShape::Rectangular : layout::ColumnShape::Irregular;
      blob.parts = rects;
      blob.bounds = geometry::bounding_box(rects);
      for (const auto& r : rects) blob.limb_ratios.push_back(aspect(r));
      blob.component_id = id;
      g.columns.push_back(std::move(blob));
      continue;
    }
    for (const auto& r : rects) g.limbs.push_back(layout::limb_from_rect(r, id));
  }

  // Parallel limbs overlapping past a junction-sized region are one wall.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < g.limbs.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < g.limbs.size() && !changed; ++j) {
        const auto& a = g.limbs[i];
        const auto& b = g.limbs[j];
        if (a.axis() != b.axis()) continue;
        const AxisRect ra = a.rect();
        const AxisRect rb = b.rect();
        if (geometry::rect_overlap_area(ra, rb) == 0) continue;
        const Length along = a.axis() == geometry::Axis::X
                                 ? std::min(ra.max.x, rb.max.x) - std::max(ra.min.x, rb.min.x)
                                 : std::min(ra.max.y, rb.max.y) - std::max(ra.min.y, rb.min.y);
        if (along <= std::max(a.thickness, b.thickness)) continue;
        AxisRect u = geometry::bounding_union(ra, rb);
        u = snap_thickness(u, options.standard_thicknesses);
        layout::WallLimb merged = layout::limb_from_rect(u, a.component_id);
        g.limbs[i] = merged;
        g.limbs.erase(g.limbs.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
    }
  }
  layout::recompute_junctions(g);
  return g;
}

VectorizeResult vectorize(const raster::SemanticRaster& raster, const std::string& source,
                          const VectorizeOptions& options) {
  Mask mask = class_mask(raster, PaletteClass::ShearWall);
  if (options.denoise) mask = denoise(mask);
  const Components comps = extract_components(mask, options.min_area);
  std::vector<std::vector<AxisRect>> per_component;
  per_component.reserve(comps.components.size());
  for (const auto& comp : comps.components) {
    per_component.push_back(decompose_component(comp, raster.frame, options));
  }
  VectorizeResult result;
  result.graph = build_layout_graph(per_component, raster.frame.scale, options);
  result.graph.source = source;
  result.noise_components = comps.noise_count;
  return result;
}

}  // namespace wallforge::vectorize
