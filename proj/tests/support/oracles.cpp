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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

using wallforge::raster::PaletteClass;
using wallforge::raster::RasterFrame;
using wallforge::raster::SemanticRaster;

namespace {

// Doubled plan coordinates of a pixel center.
std::pair<Length, Length> center2(const RasterFrame& f, int c, int r) {
  return {2 * f.origin_x + (2 * c + 1) * f.scale, 2 * f.origin_y + (2 * (f.height - 1 - r) + 1) * f.scale};
}

bool inside2(const AxisRect& rect, std::pair<Length, Length> p) {
  return 2 * rect.min.x <= p.first && p.first < 2 * rect.max.x && 2 * rect.min.y <= p.second &&
         p.second < 2 * rect.max.y;
}

int rank(PaletteClass c) {
  switch (c) {
    case PaletteClass::ShearWall: return 3;
    case PaletteClass::Opening: return 2;
    case PaletteClass::ArchWall: return 1;
    default: return 0;
  }
}

}  // namespace

SemanticRaster brute_raster(const wallforge::plan::FloorPlan& plan, const RasterFrame& frame,
                            bool include_shear) {
  SemanticRaster out(frame);
  std::vector<std::pair<const std::vector<AxisRect>*, PaletteClass>> layers{
      {&plan.arch_walls, PaletteClass::ArchWall}, {&plan.openings, PaletteClass::Opening}};
  if (include_shear) layers.push_back({&plan.shear_walls, PaletteClass::ShearWall});
  for (int r = 0; r < frame.height; ++r) {
    for (int c = 0; c < frame.width; ++c) {
      const auto p = center2(frame, c, r);
      PaletteClass best = PaletteClass::Background;
      for (const auto& [rects, cls] : layers) {
        for (const auto& rect : *rects) {
          if (inside2(rect, p) && rank(cls) > rank(best)) best = cls;
        }
      }
      out.set(c, r, best);
    }
  }
  return out;
}

PixelSet brute_pixels(const std::vector<AxisRect>& rects, const RasterFrame& frame) {
  PixelSet s;
  for (int r = 0; r < frame.height; ++r) {
    for (int c = 0; c < frame.width; ++c) {
      const auto p = center2(frame, c, r);
      for (const auto& rect : rects) {
        if (inside2(rect, p)) {
          s.insert({c, r});
          break;
        }
      }
    }
  }
  return s;
}

PixelSet pixels_of(const SemanticRaster& raster, PaletteClass cls) {
  PixelSet s;
  for (int r = 0; r < raster.height(); ++r) {
    for (int c = 0; c < raster.width(); ++c) {
      if (raster.at(c, r) == cls) s.insert({c, r});
    }
  }
  return s;
}

double iou(const PixelSet& a, const PixelSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& p : a) inter += b.count(p);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

long long brute_overlap_area(const AxisRect& a, const AxisRect& b) {
  long long n = 0;
  for (Length x = std::min(a.min.x, b.min.x); x < std::max(a.max.x, b.max.x); ++x) {
    const bool in_x = a.min.x <= x && x < a.max.x && b.min.x <= x && x < b.max.x;
    if (!in_x) continue;
    for (Length y = std::min(a.min.y, b.min.y); y < std::max(a.max.y, b.max.y); ++y) {
      if (a.min.y <= y && y < a.max.y && b.min.y <= y && y < b.max.y) ++n;
    }
  }
  return n;
}

double skeleton_length_mm(const std::vector<AxisRect>& rects, Length thickness, Length res) {
  Length x0 = rects.front().min.x, y0 = rects.front().min.y;
  Length x1 = rects.front().max.x, y1 = rects.front().max.y;
  for (const auto& r : rects) {
    x0 = std::min(x0, r.min.x);
    y0 = std::min(y0, r.min.y);
    x1 = std::max(x1, r.max.x);
    y1 = std::max(y1, r.max.y);
  }
  const int W = static_cast<int>((x1 - x0) / res) + 2;
  const int H = static_cast<int>((y1 - y0) / res) + 2;
  std::vector<std::uint8_t> g(static_cast<std::size_t>(W) * H, 0);
  auto at = [&](int c, int r) -> std::uint8_t& { return g[static_cast<std::size_t>(r) * W + c]; };
  for (const auto& rect : rects) {
    for (int r = 1; r < H - 1; ++r) {
      for (int c = 1; c < W - 1; ++c) {
        const Length cx = x0 + (c - 1) * res + res / 2;
        const Length cy = y0 + (r - 1) * res + res / 2;
        if (rect.min.x <= cx && cx < rect.max.x && rect.min.y <= cy && cy < rect.max.y) at(c, r) = 1;
      }
    }
  }

  // Zhang-Suen thinning; neighbors p2..p9 clockwise from north.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int step = 0; step < 2; ++step) {
      std::vector<std::pair<int, int>> kill;
      for (int r = 1; r < H - 1; ++r) {
        for (int c = 1; c < W - 1; ++c) {
          if (!at(c, r)) continue;
          const int p[8] = {at(c, r - 1), at(c + 1, r - 1), at(c + 1, r), at(c + 1, r + 1),
                            at(c, r + 1), at(c - 1, r + 1), at(c - 1, r), at(c - 1, r - 1)};
          int b = 0, a = 0;
          for (int i = 0; i < 8; ++i) {
            b += p[i];
            if (!p[i] && p[(i + 1) % 8]) ++a;
          }
          if (b < 2 || b > 6 || a != 1) continue;
          const bool ok = step == 0 ? (!(p[0] && p[2] && p[4]) && !(p[2] && p[4] && p[6]))
                                    : (!(p[0] && p[2] && p[6]) && !(p[0] && p[4] && p[6]));
          if (ok) kill.push_back({c, r});
        }
      }
      for (auto [c, r] : kill) at(c, r) = 0;
      changed = changed || !kill.empty();
    }
  }

  // Orthogonal links count 1, diagonal links sqrt(2) unless an orthogonal
  // path already joins the pair.
  double steps = 0;
  int ends = 0;
  for (int r = 1; r < H - 1; ++r) {
    for (int c = 1; c < W - 1; ++c) {
      if (!at(c, r)) continue;
      if (at(c + 1, r)) steps += 1;
      if (at(c, r + 1)) steps += 1;
      if (at(c + 1, r + 1) && !at(c + 1, r) && !at(c, r + 1)) steps += std::sqrt(2.0);
      if (at(c - 1, r + 1) && !at(c - 1, r) && !at(c, r + 1)) steps += std::sqrt(2.0);
      int n = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) n += (dr || dc) ? at(c + dc, r + dr) : 0;
      }
      if (n == 1) ++ends;
    }
  }
  // Thinning eats half a thickness at each free end; the end pixel itself
  // stands for another half pixel.
  return steps * static_cast<double>(res) + ends * (static_cast<double>(thickness + res) / 2.0);
}

double wall_stiffness(double L, double t, double h, double E, double G) {
  const double flexural = E * t * L * L * L / (h * h * h);
  const double shear = G * t * L / (1.2 * h);
  return flexural * shear / (flexural + shear);
}

PixelSet random_polyomino(std::mt19937& rng, int cells, int box) {
  PixelSet s;
  s.insert({box / 2, box / 2});
  std::vector<std::pair<int, int>> frontier;
  auto push_neighbors = [&](std::pair<int, int> p) {
    const int d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto& dd : d) {
      const std::pair<int, int> q{p.first + dd[0], p.second + dd[1]};
      if (q.first < 0 || q.second < 0 || q.first >= box || q.second >= box) continue;
      if (!s.count(q)) frontier.push_back(q);
    }
  };
  push_neighbors(*s.begin());
  while (static_cast<int>(s.size()) < cells && !frontier.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
    const std::size_t i = pick(rng);
    const auto q = frontier[i];
    frontier[i] = frontier.back();
    frontier.pop_back();
    if (s.count(q)) continue;
    s.insert(q);
    push_neighbors(q);
  }
  return s;
}

std::vector<AxisRect> random_wall_rects(std::mt19937& rng, int canvas, Length scale) {
  constexpr int kCell = 32;
  constexpr int kSpan = kCell - 3;
  std::vector<AxisRect> rects;
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  // px rect inside the canvas (row 0 at top is irrelevant here: plan y up).
  auto add = [&](int ox, int oy, int c0, int r0, int c1, int r1) {
    rects.push_back(AxisRect{{(ox + c0) * scale, (oy + r0) * scale}, {(ox + c1) * scale, (oy + r1) * scale}});
  };
  const int cells = canvas / kCell;
  for (int cy = 0; cy < cells; ++cy) {
    for (int cx = 0; cx < cells; ++cx) {
      if (uni(0, 9) < 4) continue;
      const int ox = cx * kCell, oy = cy * kCell;
      const int t = uni(2, 3);
      const int kind = uni(0, 4);
      const bool flip = uni(0, 1) == 1;
      auto bar = [&](int x, int y, int len, bool horizontal) {
        if (horizontal != flip) add(ox, oy, x, y, x + len, y + t);
        else add(ox, oy, y, x, y + t, x + len);
      };
      if (kind == 0) {
        bar(0, uni(0, kSpan - t), uni(8, kSpan), true);
      } else if (kind == 1) {  // L
        const int a = uni(6, kSpan), b = uni(6, kSpan);
        const bool right = uni(0, 1) == 1, top = uni(0, 1) == 1;
        const int vx = right ? a - t : 0;
        const int hy = top ? b - t : 0;
        bar(0, hy, a, true);
        bar(0, vx, b, false);
      } else if (kind == 2) {  // T
        const int a = uni(12, kSpan), b = uni(6, kSpan);
        const int p = uni(3, a - t - 3);
        const bool top = uni(0, 1) == 1;
        bar(0, top ? b - t : 0, a, true);
        bar(0, p, b, false);
      } else if (kind == 3) {  // plus
        const int a = uni(12, kSpan), b = uni(12, kSpan);
        const int p = uni(3, a - t - 3), q = uni(3, b - t - 3);
        bar(0, q, a, true);
        bar(0, p, b, false);
      } else {  // compact column
        const int w = uni(2, 6);
        const int h = std::clamp(uni(2, 6), (w + 3) / 4, w * 4);
        add(ox, oy, 0, 0, w, h);
      }
    }
  }
  return rects;
}

wallforge::layout::LayoutGraph random_layout(std::mt19937& rng, int limbs) {
  using wallforge::layout::WallLimb;
  static const Length kThick[3] = {200, 250, 300};
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  wallforge::layout::LayoutGraph g;
  for (int i = 0; i < limbs; ++i) {
    const bool along_x = i == 0 ? true : i == 1 ? false : uni(0, 1) == 1;
    const Length len = 100 * uni(6, 60);
    const Length x = 100 * uni(0, 200), y = 100 * uni(0, 200);
    WallLimb l;
    l.start = {x, y};
    l.end = along_x ? wallforge::geometry::Point2{x + len, y} : wallforge::geometry::Point2{x, y + len};
    l.thickness = kThick[uni(0, 2)];
    l.component_id = i;
    g.limbs.push_back(l);
  }
  wallforge::layout::recompute_junctions(g);
  return g;
}

}  // namespace oracle
