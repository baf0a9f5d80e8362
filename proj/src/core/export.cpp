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

#include "wallforge/export.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <tuple>

#include "wallforge/error.hpp"

namespace wallforge::exporter {

using geometry::Length;
using metrics::StructuralModel;
using raster::PaletteClass;

raster::SemanticRaster redblock_raster(const plan::FloorPlan& plan, const layout::LayoutGraph& graph,
                                       int canvas) {
  raster::SemanticRaster r(raster::frame_for_extent(plan.extent(), canvas, graph.scale));
  for (const auto& w : plan.arch_walls) raster::paint(r, w, PaletteClass::ArchWall);
  for (const auto& s : layout::shear_rects(graph)) raster::paint(r, s, PaletteClass::ShearWall);
  return r;
}

std::string export_redblock(const plan::FloorPlan& plan, const layout::LayoutGraph& graph, int canvas) {
  return raster::encode_png(redblock_raster(plan, graph, canvas));
}

layout::LayoutGraph import_redblock(std::string_view png, const plan::FloorPlan& reference, int canvas,
                                    Length scale, const vectorize::VectorizeOptions& options) {
  const raster::RasterFrame frame = raster::frame_for_extent(reference.extent(), canvas, scale);
  const raster::RgbImage img = raster::decode_png(png);
  if (img.width != frame.width || img.height != frame.height) {
    fail(ErrorCode::DimensionMismatch, "red-block image is " + std::to_string(img.width) + "x" +
                                           std::to_string(img.height) + ", reference canvas is " +
                                           std::to_string(frame.width) + "x" + std::to_string(frame.height));
  }
  return vectorize::vectorize(vectorize::classify_pixels(img, frame), "redblock", options).graph;
}

std::string_view to_string(SolverFormat f) { return f == SolverFormat::S2K ? "s2k" : "json"; }

SolverFormat solver_format_from_string(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "s2k") return SolverFormat::S2K;
  if (s == "json" || s == "modeljson") return SolverFormat::ModelJson;
  fail(ErrorCode::UnsupportedFormat, "unsupported solver format '" + std::string(name) + "'");
}

namespace {

std::string trim_number(std::string s) {
  if (s.find('.') != std::string::npos && s.find('e') == std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string meters(double mm) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", mm / 1000.0);
  return trim_number(buf);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return trim_number(buf);
}

struct JointKey {
  double x, y;  // mm
  int level;
  auto operator<=>(const JointKey&) const = default;
};

std::string write_s2k(const StructuralModel& m) {
  const int n = m.num_stories;
  if (n < 1 || m.limbs.empty()) fail(ErrorCode::InvalidArgument, "solver model needs stories and limbs");

  std::map<JointKey, int> ids;
  auto add = [&](JointKey k) { ids.emplace(k, 0); };
  for (int lv = 0; lv <= n; ++lv) {
    for (const auto& l : m.limbs) {
      add({double(l.start.x), double(l.start.y), lv});
      add({double(l.end.x), double(l.end.y), lv});
    }
  }
  for (int lv = 1; lv <= n; ++lv) add({m.mass_center.x, m.mass_center.y, lv});
  // Level-major numbering keeps every story's joints contiguous.
  std::vector<JointKey> order;
  for (const auto& [k, id] : ids) order.push_back(k);
  std::stable_sort(order.begin(), order.end(), [](const JointKey& a, const JointKey& b) {
    return std::tie(a.level, a.x, a.y) < std::tie(b.level, b.x, b.y);
  });
  for (std::size_t i = 0; i < order.size(); ++i) ids[order[i]] = static_cast<int>(i + 1);

  std::vector<Length> thicknesses;
  for (const auto& l : m.limbs) thicknesses.push_back(l.thickness);
  std::sort(thicknesses.begin(), thicknesses.end());
  thicknesses.erase(std::unique(thicknesses.begin(), thicknesses.end()), thicknesses.end());
  auto section = [](Length t) { return "WALL" + std::to_string(t); };

  std::string out;
  auto line = [&](const std::string& s) { out += s + "\n"; };
  line("File wallforge.s2k");
  line("");
  line("TABLE:  \"PROGRAM CONTROL\"");
  line("   ProgramName=SAP2000   Version=14.0.0   CurrUnits=\"N, m, C\"   SteelCode=None   ConcCode=None");
  line("");
  line("TABLE:  \"MATERIAL PROPERTIES 01 - GENERAL\"");
  line("   Material=CONC   Type=Concrete   SymType=Isotropic");
  line("");
  line("TABLE:  \"MATERIAL PROPERTIES 02 - BASIC MECHANICAL PROPERTIES\"");
  const double nu = m.E / (2.0 * m.G) - 1.0;
  line("   Material=CONC   UnitMass=0   UnitWeight=0   E1=" + num(m.E) + "   G12=" + num(m.G) + "   U12=" + num(nu));
  line("");
  line("TABLE:  \"AREA SECTION PROPERTIES\"");
  for (Length t : thicknesses) {
    line("   Section=" + section(t) + "   Material=CONC   AreaType=Shell   Type=Shell-Thin   Thickness=" +
         meters(double(t)));
  }
  line("");
  line("TABLE:  \"JOINT COORDINATES\"");
  for (const auto& k : order) {
    line("   Joint=" + std::to_string(ids[k]) + "   CoordSys=GLOBAL   CoordType=Cartesian   XorR=" + meters(k.x) +
         "   Y=" + meters(k.y) + "   Z=" + meters(double(k.level) * double(m.story_height)));
  }
  line("");
  line("TABLE:  \"CONNECTIVITY - AREA\"");
  std::vector<std::string> assigns;
  int area = 0;
  for (int lv = 0; lv < n; ++lv) {
    for (const auto& l : m.limbs) {
      ++area;
      const int j1 = ids[{double(l.start.x), double(l.start.y), lv}];
      const int j2 = ids[{double(l.end.x), double(l.end.y), lv}];
      const int j3 = ids[{double(l.end.x), double(l.end.y), lv + 1}];
      const int j4 = ids[{double(l.start.x), double(l.start.y), lv + 1}];
      line("   Area=" + std::to_string(area) + "   NumJoints=4   Joint1=" + std::to_string(j1) + "   Joint2=" +
           std::to_string(j2) + "   Joint3=" + std::to_string(j3) + "   Joint4=" + std::to_string(j4));
      assigns.push_back("   Area=" + std::to_string(area) + "   Section=" + section(l.thickness));
    }
  }
  line("");
  line("TABLE:  \"AREA SECTION ASSIGNMENTS\"");
  for (const auto& a : assigns) line(a);
  line("");
  line("TABLE:  \"JOINT RESTRAINT ASSIGNMENTS\"");
  for (const auto& k : order) {
    if (k.level == 0) {
      line("   Joint=" + std::to_string(ids[k]) + "   U1=Yes   U2=Yes   U3=Yes   R1=Yes   R2=Yes   R3=Yes");
    }
  }
  line("");
  line("TABLE:  \"CONSTRAINT DEFINITIONS - DIAPHRAGM\"");
  for (int lv = 1; lv <= n; ++lv) {
    line("   Name=DIAPH" + std::to_string(lv) + "   CoordSys=GLOBAL   Axis=Z   MultiLevel=No");
  }
  line("");
  line("TABLE:  \"JOINT CONSTRAINT ASSIGNMENTS\"");
  for (const auto& k : order) {
    if (k.level > 0) {
      line("   Joint=" + std::to_string(ids[k]) + "   Constraint=DIAPH" + std::to_string(k.level) +
           "   Type=Diaphragm");
    }
  }
  line("");
  line("TABLE:  \"JOINT ADDED MASS ASSIGNMENTS\"");
  const double mass = m.story_mass();
  const double J = m.rotational_inertia();
  for (int lv = 1; lv <= n; ++lv) {
    line("   Joint=" + std::to_string(ids[{m.mass_center.x, m.mass_center.y, lv}]) + "   CoordSys=GLOBAL   U1=" +
         num(mass) + "   U2=" + num(mass) + "   U3=0   R1=0   R2=0   R3=" + num(J));
  }
  line("");
  line("TABLE:  \"LOAD PATTERN DEFINITIONS\"");
  line("   LoadPat=EQX   DesignType=Quake   SelfWtMult=0");
  line("   LoadPat=EQY   DesignType=Quake   SelfWtMult=0");
  line("");
  line("TABLE:  \"JOINT LOADS - FORCE\"");
  const std::vector<double> forces = metrics::story_forces(m);
  const double ex = m.eccentricity_ratio * m.plan_extent.height() / 1000.0;
  const double ey = m.eccentricity_ratio * m.plan_extent.width() / 1000.0;
  for (int lv = 1; lv <= n; ++lv) {
    const double F = forces[lv - 1];
    const std::string j = std::to_string(ids[{m.mass_center.x, m.mass_center.y, lv}]);
    line("   Joint=" + j + "   LoadPat=EQX   CoordSys=GLOBAL   F1=" + num(F) + "   F2=0   M3=" + num(-F * ex));
    line("   Joint=" + j + "   LoadPat=EQY   CoordSys=GLOBAL   F1=0   F2=" + num(F) + "   M3=" + num(F * ey));
  }
  line("");
  line("END TABLE DATA");
  return out;
}

nlohmann::json rect_json(const geometry::AxisRect& r) { return {r.min.x, r.min.y, r.max.x, r.max.y}; }

}  // namespace

nlohmann::json model_to_json(const StructuralModel& m) {
  return nlohmann::json{{"format", "wallforge.model"},
                        {"version", 1},
                        {"units", {{"length", "mm"}, {"modulus", "Pa"}, {"mass_density", "kg/m^2"}}},
                        {"limbs", m.limbs},
                        {"num_stories", m.num_stories},
                        {"story_height", m.story_height},
                        {"E", m.E},
                        {"G", m.G},
                        {"floor_mass_density", m.floor_mass_density},
                        {"plan_extent", rect_json(m.plan_extent)},
                        {"mass_center", {m.mass_center.x, m.mass_center.y}},
                        {"eccentricity_ratio", m.eccentricity_ratio},
                        {"base_shear_coeff", m.base_shear_coeff},
                        {"gravity", m.gravity}};
}

StructuralModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "wallforge.model" || j.at("version") != 1) {
      fail(ErrorCode::UnsupportedFormat, "not a wallforge.model v1 document");
    }
    StructuralModel m;
    m.limbs = j.at("limbs").get<std::vector<layout::WallLimb>>();
    m.num_stories = j.at("num_stories").get<int>();
    m.story_height = j.at("story_height").get<Length>();
    m.E = j.at("E").get<double>();
    m.G = j.at("G").get<double>();
    m.floor_mass_density = j.at("floor_mass_density").get<double>();
    const auto& e = j.at("plan_extent");
    m.plan_extent = {{e.at(0).get<Length>(), e.at(1).get<Length>()}, {e.at(2).get<Length>(), e.at(3).get<Length>()}};
    m.mass_center = {j.at("mass_center").at(0).get<double>(), j.at("mass_center").at(1).get<double>()};
    m.eccentricity_ratio = j.at("eccentricity_ratio").get<double>();
    m.base_shear_coeff = j.at("base_shear_coeff").get<double>();
    m.gravity = j.at("gravity").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::UnsupportedFormat, std::string("bad model document: ") + e.what());
  }
}

StructuralModel import_model_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::UnsupportedFormat, std::string("model document is not JSON: ") + e.what());
  }
  return model_from_json(j);
}

std::string export_solver_model(const StructuralModel& model, SolverFormat format) {
  if (format == SolverFormat::S2K) return write_s2k(model);
  return model_to_json(model).dump(2) + "\n";
}

}  // namespace wallforge::exporter
