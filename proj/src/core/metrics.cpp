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

#include "wallforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "wallforge/error.hpp"

namespace wallforge::metrics {

namespace {

constexpr double kMm = 1e-3;
constexpr double kPi = 3.14159265358979323846;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

AxisRect overlap(const AxisRect& a, const AxisRect& b) {
  return AxisRect{{std::max(a.min.x, b.min.x), std::max(a.min.y, b.min.y)},
                  {std::min(a.max.x, b.max.x), std::min(a.max.y, b.max.y)}};
}

// How much of limb `i`'s two ends is shared with other limbs.
std::pair<Length, Length> end_deductions(const LayoutGraph& g, std::size_t i) {
  const auto& li = g.limbs[i];
  const AxisRect ri = li.rect();
  const bool along_x = li.axis() == geometry::Axis::X;
  Length d_start = 0, d_end = 0;
  for (std::size_t j = 0; j < g.limbs.size(); ++j) {
    if (j == i) continue;
    const auto& lj = g.limbs[j];
    const AxisRect rj = lj.rect();
    if (geometry::rect_overlap_area(ri, rj) == 0) continue;
    const AxisRect r = overlap(ri, rj);
    Length share = lj.thickness / 2;
    if (lj.axis() == li.axis()) share = (along_x ? r.width() : r.height()) / 2;
    const bool at_start = along_x ? r.min.x == ri.min.x : r.min.y == ri.min.y;
    const bool at_end = along_x ? r.max.x == ri.max.x : r.max.y == ri.max.y;
    if (at_start) d_start = std::max(d_start, share);
    if (at_end) d_end = std::max(d_end, share);
  }
  return {d_start, d_end};
}

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace

GeometricMetrics compute_geometric_metrics(const LayoutGraph& graph, const LimbThresholds& thresholds) {
  GeometricMetrics m;
  const int n = static_cast<int>(graph.limbs.size());
  m.n_column = static_cast<int>(graph.columns.size());

  UnionFind uf(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (geometry::rects_touch(graph.limbs[i].rect(), graph.limbs[j].rect())) uf.join(i, j);
    }
  }
  std::map<int, bool> all_column;
  for (int i = 0; i < n; ++i) {
    const auto& l = graph.limbs[i];
    const LimbClass c = classify_limb(l.length(), l.thickness, thresholds);
    if (c == LimbClass::ShortLimb) ++m.n_short;
    auto [it, fresh] = all_column.try_emplace(uf.find(i), true);
    it->second = it->second && c == LimbClass::Column;
  }
  for (const auto& [root, col] : all_column) m.n_column += col ? 1 : 0;

  for (int i = 0; i < n; ++i) {
    const auto [a, b] = end_deductions(graph, static_cast<std::size_t>(i));
    m.l_wall_mm += std::max<Length>(0, graph.limbs[i].length() - a - b);
  }
  m.l_wall = static_cast<double>(std::llround(static_cast<double>(m.l_wall_mm) / 100.0)) / 10.0;
  return m;
}

double StructuralModel::story_mass() const {
  return floor_mass_density * (plan_extent.width() * kMm) * (plan_extent.height() * kMm);
}

double StructuralModel::rotational_inertia() const {
  const double a = plan_extent.width() * kMm;
  const double b = plan_extent.height() * kMm;
  return story_mass() * (a * a + b * b) / 12.0;
}

double limb_lateral_stiffness(double length_m, double thickness_m, double height_m, double E, double G) {
  const double I = thickness_m * length_m * length_m * length_m / 12.0;
  const double A = thickness_m * length_m;
  const double flex = height_m * height_m * height_m / (12.0 * E * I);
  const double shear = 1.2 * height_m / (G * A);
  return 1.0 / (flex + shear);
}

StructuralModel build_structural_model(const LayoutGraph& graph, const plan::StoryMeta& story,
                                       const AxisRect& plan_extent, const MaterialConfig& material) {
  if (!plan_extent.valid()) fail(ErrorCode::InvalidArgument, "plan extent must have positive area");
  if (story.num_stories < 1 || story.story_height <= 0) {
    fail(ErrorCode::InvalidArgument, "story count and height must be positive");
  }
  const double G = material.shear_modulus();
  if (!(material.E > 0 && G > 0 && material.floor_mass_density > 0 && material.gravity > 0 &&
        material.base_shear_coeff > 0 && material.eccentricity_ratio >= 0)) {
    fail(ErrorCode::InvalidArgument, "material values must be positive");
  }
  bool has_x = false, has_y = false;
  for (const auto& l : graph.limbs) {
    if (l.length() <= 0 || l.thickness <= 0) continue;
    (l.axis() == geometry::Axis::X ? has_x : has_y) = true;
  }
  if (!has_x || !has_y) {
    fail(ErrorCode::InsufficientLateralSystem,
         std::string("no lateral stiffness along ") + (has_x ? "Y" : "X"));
  }
  StructuralModel m;
  m.limbs = graph.limbs;
  m.num_stories = story.num_stories;
  m.story_height = story.story_height;
  m.E = material.E;
  m.G = G;
  m.floor_mass_density = material.floor_mass_density;
  m.plan_extent = plan_extent;
  m.mass_center = {(plan_extent.min.x + plan_extent.max.x) / 2.0, (plan_extent.min.y + plan_extent.max.y) / 2.0};
  m.eccentricity_ratio = material.eccentricity_ratio;
  m.base_shear_coeff = material.base_shear_coeff;
  m.gravity = material.gravity;
  return m;
}

// Limbs with equal (length, thickness) share one stiffness, so offsets are
// summed per group in doubled integer mm. Mirror-image layouts then cancel
// exactly and translations leave every term bit-identical.
Eigen::Matrix3d story_stiffness(const StructuralModel& model) {
  struct Sums {
    Length count = 0;
    Length s1 = 0;
    Length s2 = 0;
  };
  std::map<std::tuple<int, Length, Length>, Sums> groups;
  const Length cx2 = std::llround(2.0 * model.mass_center.x);
  const Length cy2 = std::llround(2.0 * model.mass_center.y);
  for (const auto& l : model.limbs) {
    if (l.length() <= 0 || l.thickness <= 0) continue;
    const AxisRect r = l.rect();
    const bool along_x = l.axis() == geometry::Axis::X;
    const Length e2 = along_x ? (r.min.y + r.max.y) - cy2 : (r.min.x + r.max.x) - cx2;
    Sums& s = groups[{along_x ? 0 : 1, l.length(), l.thickness}];
    s.count += 1;
    s.s1 += e2;
    s.s2 += e2 * e2;
  }
  const double h = model.story_height * kMm;
  double kxx = 0, kyy = 0, kxt = 0, kyt = 0, ktt_x = 0, ktt_y = 0;
  for (const auto& [key, s] : groups) {
    const auto& [dir, len, t] = key;
    const double k = limb_lateral_stiffness(len * kMm, t * kMm, h, model.E, model.G);
    const double first = k * (static_cast<double>(s.s1) * 0.5 * kMm);
    const double second = k * (static_cast<double>(s.s2) * 0.25 * kMm * kMm);
    if (dir == 0) {
      kxx += k * static_cast<double>(s.count);
      kxt -= first;
      ktt_x += second;
    } else {
      kyy += k * static_cast<double>(s.count);
      kyt += first;
      ktt_y += second;
    }
  }
  Eigen::Matrix3d K;
  K << kxx, 0.0, kxt,
       0.0, kyy, kyt,
       kxt, kyt, ktt_x + ktt_y;
  return K;
}

Eigen::MatrixXd assemble_stiffness(const StructuralModel& model) {
  const int n = model.num_stories;
  const Eigen::Matrix3d Ks = story_stiffness(model);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  // story s joins floor s-1 (ground for s = 0) to floor s
  for (int s = 0; s < n; ++s) {
    K.block<3, 3>(3 * s, 3 * s) += Ks;
    if (s > 0) {
      K.block<3, 3>(3 * (s - 1), 3 * (s - 1)) += Ks;
      K.block<3, 3>(3 * (s - 1), 3 * s) -= Ks;
      K.block<3, 3>(3 * s, 3 * (s - 1)) -= Ks;
    }
  }
  return K;
}

Eigen::MatrixXd assemble_mass(const StructuralModel& model) {
  const int n = model.num_stories;
  Eigen::VectorXd d(3 * n);
  const double m = model.story_mass();
  const double J = model.rotational_inertia();
  for (int s = 0; s < n; ++s) d.segment<3>(3 * s) << m, m, J;
  return d.asDiagonal();
}

std::string_view to_string(DofClass c) {
  switch (c) {
    case DofClass::X: return "X";
    case DofClass::Y: return "Y";
    case DofClass::Theta: return "Theta";
  }
  return "X";
}

std::vector<Mode> solve_modes(const StructuralModel& model, int num_modes) {
  const int dof = 3 * model.num_stories;
  if (num_modes < 1 || num_modes > dof) {
    fail(ErrorCode::InvalidArgument, "num_modes must be in [1, 3 * num_stories]");
  }
  const Eigen::MatrixXd K = assemble_stiffness(model);
  const Eigen::MatrixXd M = assemble_mass(model);
  if (K != K.transpose()) fail(ErrorCode::NonPositiveDefinite, "stiffness matrix is not symmetric");
  if (Eigen::LLT<Eigen::MatrixXd>(K).info() != Eigen::Success) {
    fail(ErrorCode::NonPositiveDefinite, "stiffness matrix is not positive definite");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(M).info() != Eigen::Success) {
    fail(ErrorCode::NonPositiveDefinite, "mass matrix is not positive definite");
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  if (es.info() != Eigen::Success) fail(ErrorCode::EigenFailure, "generalized eigen-solve did not converge");
  const Eigen::VectorXd lambda = es.eigenvalues();
  Eigen::MatrixXd phi = es.eigenvectors();
  if (lambda.minCoeff() <= 0) fail(ErrorCode::NonPositiveDefinite, "non-positive eigenvalue");

  // Repeated frequencies: pick the basis that separates X from the rest.
  Eigen::VectorXd x_mass = Eigen::VectorXd::Zero(dof);
  for (int s = 0; s < model.num_stories; ++s) x_mass(3 * s) = M(3 * s, 3 * s);
  for (int i = 0; i < dof;) {
    int j = i + 1;
    while (j < dof && lambda(j) - lambda(j - 1) <= 1e-8 * lambda(j)) ++j;
    if (j - i > 1) {
      const Eigen::MatrixXd block = phi.middleCols(i, j - i);
      const Eigen::MatrixXd P = block.transpose() * x_mass.asDiagonal() * block;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rot(P);
      const Eigen::MatrixXd Q = rot.eigenvectors().rowwise().reverse();
      phi.middleCols(i, j - i) = block * Q;
    }
    i = j;
  }

  std::vector<Mode> modes;
  for (int i = 0; i < num_modes; ++i) {
    Mode mode;
    mode.omega2 = lambda(i);
    mode.period = 2.0 * kPi / std::sqrt(lambda(i));
    Eigen::VectorXd v = phi.col(i);
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v(at) < 0) v = -v;

    const Eigen::VectorXd Kv = K * v;
    const double residual = (Kv - lambda(i) * (M * v)).norm();
    if (residual > 1e-8 * Kv.norm()) {
      fail(ErrorCode::EigenFailure, "mode " + std::to_string(i + 1) + " residual " + fmt(residual));
    }

    std::array<double, 3> e{};
    for (int d = 0; d < dof; ++d) e[d % 3] += M(d, d) * v(d) * v(d);
    const double total = e[0] + e[1] + e[2];
    for (auto& x : e) x /= total;
    mode.participation = e;
    mode.dominant = static_cast<DofClass>(std::max_element(e.begin(), e.end()) - e.begin());
    mode.shape = std::move(v);
    modes.push_back(std::move(mode));
  }
  return modes;
}

std::vector<double> story_forces(const StructuralModel& model) {
  const int n = model.num_stories;
  const double V = model.base_shear_coeff * model.story_mass() * model.gravity * n;
  const double level_sum = n * (n + 1) / 2.0;
  std::vector<double> f(n);
  for (int s = 0; s < n; ++s) f[s] = V * (s + 1) / level_sum;
  return f;
}

StructuralIndicators compute_structural_indicators(const StructuralModel& model) {
  const int n = model.num_stories;
  const int dof = 3 * n;
  StructuralIndicators out;

  const auto modes = solve_modes(model, dof);
  const Mode* first_t = nullptr;
  const Mode* first_r = nullptr;
  for (const auto& m : modes) {
    if (m.dominant == DofClass::Theta) {
      if (!first_r) first_r = &m;
    } else if (!first_t) {
      first_t = &m;
    }
  }
  // Strongly coupled plans can lack a torsion-dominant mode; the mode with the
  // largest torsional share stands in.
  if (!first_r) {
    double best = 0;
    for (const auto& m : modes) best = std::max(best, m.participation[2]);
    for (const auto& m : modes) {
      if (m.participation[2] >= best - 1e-9) {
        first_r = &m;
        break;
      }
    }
  }
  if (!first_t) fail(ErrorCode::EigenFailure, "no translation-dominant mode");
  out.period_translation = first_t->period;
  out.period_torsion = first_r->period;
  out.r_period = first_r->period / first_t->period;

  const Eigen::MatrixXd K = assemble_stiffness(model);
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) fail(ErrorCode::NonPositiveDefinite, "stiffness matrix is not positive definite");

  const std::vector<double> forces = story_forces(model);
  const double h = model.story_height * kMm;
  const AxisRect& ext = model.plan_extent;
  const double a = ext.width() * kMm;
  const double b = ext.height() * kMm;
  const double x_ends[2] = {(ext.min.x - model.mass_center.x) * kMm, (ext.max.x - model.mass_center.x) * kMm};
  const double y_ends[2] = {(ext.min.y - model.mass_center.y) * kMm, (ext.max.y - model.mass_center.y) * kMm};

  double drift = std::numeric_limits<double>::infinity();
  double torsion = 0;
  for (int dir = 0; dir < 2; ++dir) {
    for (int sign : {1, -1}) {
      const double e = sign * model.eccentricity_ratio * (dir == 0 ? b : a);
      Eigen::VectorXd P = Eigen::VectorXd::Zero(dof);
      for (int s = 0; s < n; ++s) {
        const double F = forces[s];
        P(3 * s + dir) = F;
        P(3 * s + 2) = dir == 0 ? -F * e : F * e;
      }
      const Eigen::VectorXd u = llt.solve(P);
      const double* ends = dir == 0 ? y_ends : x_ends;
      auto edge = [&](int s, int k) {
        if (s < 0) return 0.0;
        const double th = u(3 * s + 2);
        return dir == 0 ? u(3 * s) - th * ends[k] : u(3 * s + 1) + th * ends[k];
      };
      for (int s = 0; s < n; ++s) {
        const double d0 = edge(s, 0), d1 = edge(s, 1);
        for (int k = 0; k < 2; ++k) {
          const double delta = std::abs(edge(s, k) - edge(s - 1, k));
          if (delta > 0) drift = std::min(drift, h / delta);
        }
        const double mean = (std::abs(d0) + std::abs(d1)) / 2.0;
        if (mean > 0) torsion = std::max(torsion, std::max(std::abs(d0), std::abs(d1)) / mean);
      }
    }
  }
  out.drift_reciprocal = drift;
  out.r_torsion = torsion;
  return out;
}

std::string_view to_string(Flag f) { return f == Flag::Pass ? "Pass" : "Exceed"; }

LimitFlags evaluate_limits(double drift_reciprocal, double r_torsion, double r_period) {
  return LimitFlags{drift_reciprocal >= kDriftReciprocalLimit ? Flag::Pass : Flag::Exceed,
                    r_torsion <= kTorsionLimit ? Flag::Pass : Flag::Exceed,
                    r_period <= kPeriodLimit ? Flag::Pass : Flag::Exceed};
}

MetricReport evaluate_layout(const LayoutGraph& graph, const plan::StoryMeta& story,
                             const AxisRect& plan_extent, const EvaluationConfig& config,
                             std::optional<double> s_layout) {
  MetricReport r;
  const GeometricMetrics g = compute_geometric_metrics(graph, config.thresholds);
  r.n_column = g.n_column;
  r.n_short = g.n_short;
  r.l_wall = g.l_wall;
  if (s_layout && (*s_layout < 0 || *s_layout > 10)) fail(ErrorCode::OutOfRange, "s_layout must be in [0, 10]");
  r.s_layout = s_layout;

  const MaterialConfig& mat = config.material;
  const MaterialConfig def;
  const LimbThresholds def_t;
  auto prov = [](bool is_default) { return std::string(is_default ? "default" : "configured"); };
  r.assumptions = {
      {"analysis_model", "rigid-diaphragm shear building, 3 DOF per floor at the plan-extent center",
       "approximation"},
      {"lateral_elements", "wall limbs along their strong axis; columns carry no lateral stiffness",
       "approximation"},
      {"E", fmt(mat.E) + " Pa", prov(mat.E == def.E)},
      {"G", fmt(mat.shear_modulus()) + " Pa", prov(!mat.G)},
      {"floor_mass_density", fmt(mat.floor_mass_density) + " kg/m2",
       prov(mat.floor_mass_density == def.floor_mass_density)},
      {"story_height", std::to_string(story.story_height) + " mm", "plan"},
      {"num_stories", std::to_string(story.num_stories), "plan"},
      {"base_shear_coeff", fmt(mat.base_shear_coeff), prov(mat.base_shear_coeff == def.base_shear_coeff)},
      {"eccentricity_ratio", fmt(mat.eccentricity_ratio),
       prov(mat.eccentricity_ratio == def.eccentricity_ratio)},
      {"lateral_load", "inverted triangular", "approximation"},
      {"torsion_ratio", "plan-extent edge displacements, both directions and eccentricity signs",
       "approximation"},
      {"column_ratio", fmt(config.thresholds.column_ratio),
       prov(config.thresholds.column_ratio == def_t.column_ratio)},
      {"short_ratio", fmt(config.thresholds.short_ratio),
       prov(config.thresholds.short_ratio == def_t.short_ratio)},
  };

  try {
    const StructuralModel model = build_structural_model(graph, story, plan_extent, mat);
    const StructuralIndicators s = compute_structural_indicators(model);
    r.drift_reciprocal = s.drift_reciprocal;
    r.r_torsion = s.r_torsion;
    r.r_period = s.r_period;
    const LimitFlags f = evaluate_limits(s.drift_reciprocal, s.r_torsion, s.r_period);
    r.drift_flag = f.drift;
    r.torsion_flag = f.torsion;
    r.period_flag = f.period;
  } catch (const Error& e) {
    r.analysis_error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return r;
}

std::string render_table(const MetricReport& r) {
  std::ostringstream out;
  char line[160];
  auto row = [&](int idx, const char* name, const std::string& value, const char* limit,
                 std::optional<Flag> flag) {
    std::snprintf(line, sizeof line, "%d  %-12s %12s  %-8s %s\n", idx, name, value.c_str(), limit,
                  flag ? (*flag == Flag::Exceed ? "EXCEED" : "ok") : "");
    out << line;
  };
  auto num = [](std::optional<double> v, const char* format) {
    if (!v) return std::string("-");
    char buf[64];
    std::snprintf(buf, sizeof buf, format, *v);
    return std::string(buf);
  };
  std::snprintf(line, sizeof line, "#  %-12s %12s  %-8s %s\n", "indicator", "value", "limit", "flag");
  out << line;
  row(1, "1/drift", num(r.drift_reciprocal, "%.0f"), ">=1000", r.drift_flag);
  row(2, "r_torsion", num(r.r_torsion, "%.2f"), "<=1.4", r.torsion_flag);
  row(3, "r_period", num(r.r_period, "%.2f"), "<=0.9", r.period_flag);
  row(4, "N_column", std::to_string(r.n_column), "", std::nullopt);
  row(5, "N_short", std::to_string(r.n_short), "", std::nullopt);
  row(6, "L_wall (m)", num(r.l_wall, "%.1f"), "", std::nullopt);
  row(7, "S_layout", num(r.s_layout, "%.2f"), "0-10", std::nullopt);
  if (r.analysis_error) out << "analysis error: " << *r.analysis_error << "\n";
  return out.str();
}

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }
nlohmann::json opt(const std::optional<Flag>& f) {
  return f ? nlohmann::json(std::string(to_string(*f))) : nlohmann::json(nullptr);
}

std::optional<double> get_double(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::optional<Flag> get_flag(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>() == "Exceed" ? Flag::Exceed : Flag::Pass;
}

}  // namespace

void to_json(nlohmann::json& j, const MetricReport& r) {
  nlohmann::json assumptions = nlohmann::json::array();
  for (const auto& a : r.assumptions) {
    assumptions.push_back({{"parameter", a.parameter}, {"value", a.value}, {"provenance", a.provenance}});
  }
  j = nlohmann::json{{"drift_reciprocal", opt(r.drift_reciprocal)},
                     {"r_torsion", opt(r.r_torsion)},
                     {"r_period", opt(r.r_period)},
                     {"n_column", r.n_column},
                     {"n_short", r.n_short},
                     {"l_wall", r.l_wall},
                     {"s_layout", opt(r.s_layout)},
                     {"flags", {{"drift", opt(r.drift_flag)}, {"torsion", opt(r.torsion_flag)}, {"period", opt(r.period_flag)}}},
                     {"assumptions", assumptions},
                     {"analysis_error", r.analysis_error ? nlohmann::json(*r.analysis_error) : nlohmann::json(nullptr)}};
}

void from_json(const nlohmann::json& j, MetricReport& r) {
  r = MetricReport{};
  r.drift_reciprocal = get_double(j, "drift_reciprocal");
  r.r_torsion = get_double(j, "r_torsion");
  r.r_period = get_double(j, "r_period");
  r.n_column = j.at("n_column").get<int>();
  r.n_short = j.at("n_short").get<int>();
  r.l_wall = j.at("l_wall").get<double>();
  r.s_layout = get_double(j, "s_layout");
  if (j.contains("flags")) {
    const auto& f = j.at("flags");
    r.drift_flag = get_flag(f, "drift");
    r.torsion_flag = get_flag(f, "torsion");
    r.period_flag = get_flag(f, "period");
  }
  for (const auto& a : j.value("assumptions", nlohmann::json::array())) {
    r.assumptions.push_back({a.at("parameter").get<std::string>(), a.at("value").get<std::string>(),
                             a.at("provenance").get<std::string>()});
  }
  if (j.contains("analysis_error") && !j.at("analysis_error").is_null()) {
    r.analysis_error = j.at("analysis_error").get<std::string>();
  }
}

}  // namespace wallforge::metrics
