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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "wallforge/layout.hpp"
#include "wallforge/plan.hpp"

namespace wallforge::metrics {

using geometry::AxisRect;
using geometry::Length;
using layout::LayoutGraph;
using layout::LimbClass;
using layout::LimbThresholds;
using layout::classify_limb;

struct GeometricMetrics {
  int n_column = 0;
  int n_short = 0;
  Length l_wall_mm = 0;
  double l_wall = 0.0;  // meters, rounded to 0.1
};

GeometricMetrics compute_geometric_metrics(const LayoutGraph& graph, const LimbThresholds& thresholds = {});

struct MaterialConfig {
  double E = 3.0e10;                 // Pa
  std::optional<double> G;           // Pa; 0.4 E when unset
  double floor_mass_density = 1300;  // kg/m^2
  double eccentricity_ratio = 0.05;
  double base_shear_coeff = 0.08;
  double gravity = 9.81;

  double shear_modulus() const { return G ? *G : 0.4 * E; }
};

struct PointF {
  double x = 0;
  double y = 0;
  bool operator==(const PointF&) const = default;
};

struct StructuralModel {
  std::vector<layout::WallLimb> limbs;
  int num_stories = 1;
  Length story_height = 3000;  // mm
  double E = 3.0e10;
  double G = 1.2e10;
  double floor_mass_density = 1300;
  AxisRect plan_extent;
  PointF mass_center;  // mm
  double eccentricity_ratio = 0.05;
  double base_shear_coeff = 0.08;
  double gravity = 9.81;

  double story_mass() const;           // kg
  double rotational_inertia() const;   // kg m^2
  bool operator==(const StructuralModel&) const = default;
};

/// Lateral stiffness (N/m) of one limb along its strong axis, flexure plus
/// shear, lengths in meters.
double limb_lateral_stiffness(double length_m, double thickness_m, double height_m, double E, double G);

/// Throws InsufficientLateralSystem when either direction has no limb.
StructuralModel build_structural_model(const LayoutGraph& graph, const plan::StoryMeta& story,
                                       const AxisRect& plan_extent, const MaterialConfig& material = {});

/// One story's 3x3 stiffness about the mass center, DOF order (ux, uy, theta).
Eigen::Matrix3d story_stiffness(const StructuralModel& model);
Eigen::MatrixXd assemble_stiffness(const StructuralModel& model);
Eigen::MatrixXd assemble_mass(const StructuralModel& model);

enum class DofClass { X, Y, Theta };
std::string_view to_string(DofClass c);

struct Mode {
  double period = 0;  // s
  double omega2 = 0;
  Eigen::VectorXd shape;  // M-orthonormal, largest component positive
  DofClass dominant = DofClass::X;
  std::array<double, 3> participation{};  // mass fractions over X, Y, theta
};

/// Generalized symmetric eigen-solve, periods sorted descending.
std::vector<Mode> solve_modes(const StructuralModel& model, int num_modes);

struct StructuralIndicators {
  double drift_reciprocal = 0;
  double r_torsion = 0;
  double r_period = 0;
  double period_translation = 0;
  double period_torsion = 0;
};

/// Inverted-triangular equivalent lateral forces (N), story 1 first.
std::vector<double> story_forces(const StructuralModel& model);

StructuralIndicators compute_structural_indicators(const StructuralModel& model);

enum class Flag { Pass, Exceed };
std::string_view to_string(Flag f);

inline constexpr double kDriftReciprocalLimit = 1000.0;
inline constexpr double kTorsionLimit = 1.4;
inline constexpr double kPeriodLimit = 0.9;

struct LimitFlags {
  Flag drift = Flag::Pass;
  Flag torsion = Flag::Pass;
  Flag period = Flag::Pass;
  bool operator==(const LimitFlags&) const = default;
};

LimitFlags evaluate_limits(double drift_reciprocal, double r_torsion, double r_period);

struct Assumption {
  std::string parameter;
  std::string value;
  std::string provenance;
};

struct MetricReport {
  std::optional<double> drift_reciprocal;
  std::optional<double> r_torsion;
  std::optional<double> r_period;
  int n_column = 0;
  int n_short = 0;
  double l_wall = 0;
  std::optional<double> s_layout;
  std::optional<Flag> drift_flag;
  std::optional<Flag> torsion_flag;
  std::optional<Flag> period_flag;
  std::vector<Assumption> assumptions;
  std::optional<std::string> analysis_error;
};

struct EvaluationConfig {
  MaterialConfig material;
  LimbThresholds thresholds;
};

/// All seven indicators. Structural analysis failures are recorded in
/// `analysis_error` and leave the structural fields empty.
MetricReport evaluate_layout(const LayoutGraph& graph, const plan::StoryMeta& story,
                             const AxisRect& plan_extent, const EvaluationConfig& config = {},
                             std::optional<double> s_layout = std::nullopt);

/// Plain-text table in indicator order 1..7 with EXCEED markers.
std::string render_table(const MetricReport& report);

void to_json(nlohmann::json& j, const MetricReport& r);
void from_json(const nlohmann::json& j, MetricReport& r);

}  // namespace wallforge::metrics
