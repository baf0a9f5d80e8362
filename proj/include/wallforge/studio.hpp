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

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wallforge/layout.hpp"
#include "wallforge/metrics.hpp"
#include "wallforge/plan.hpp"

namespace wallforge::studio {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Persistence points. Every file the studio writes goes through atomic_write
// (temp file, fsync, rename); each stage is a numbered persistence point.

/// Test hook: the n-th persistence point reached after arming (0-based)
/// throws InjectedFault, after leaving whatever a crash there would leave on
/// disk. Negative n disarms.
void arm_fault(long n);
/// Persistence points passed since the last arm_fault call.
long persistence_points();

void atomic_write(const fs::path& path, std::string_view bytes);

// ---------------------------------------------------------------------------

enum class StepKind { Ingest, Rasterize, BuildDataset, Generate, Vectorize, Evaluate, Export };
std::string_view to_string(StepKind k);
StepKind step_kind_from_string(std::string_view s);

struct StepRecord {
  StepKind kind = StepKind::Ingest;
  nlohmann::json params;
  std::vector<std::string> outputs;
  int revision = 0;
  bool operator==(const StepRecord&) const = default;
};

struct CandidateSetRecord {
  std::string id;                   // C0001, C0002, ...
  std::string file;                 // CandidateSet JSON, relative to the project
  std::vector<std::string> images;  // one PNG per candidate
  std::vector<std::int64_t> seeds;
  std::optional<int> preferred;
  bool operator==(const CandidateSetRecord&) const = default;
};

struct LayoutRecord {
  std::string id;  // L0001, L0002, ...
  std::optional<std::string> parent;
  std::string origin;  // "C0001/2", "edit", "redblock"
  nlohmann::json edit;  // null unless origin == "edit"
  std::string file;
  std::optional<std::string> report;
  bool operator==(const LayoutRecord&) const = default;
};

struct ScoreRecord {
  std::string layout;
  std::string critic;
  double score = 0;
  bool operator==(const ScoreRecord&) const = default;
};

struct ExportRecord {
  std::string layout;
  std::string format;
  std::string file;
  bool operator==(const ExportRecord&) const = default;
};

/// Contents of project.json.
struct ProjectState {
  std::string name;
  int revision = 0;
  std::string source_dxf;
  std::string layer_config;
  std::optional<std::string> plan;
  int canvas = 512;
  geometry::Length scale = 100;
  std::optional<std::string> condition_png;
  std::optional<std::string> target_png;
  std::optional<std::string> dataset_dir;
  std::vector<CandidateSetRecord> candidate_sets;
  std::vector<LayoutRecord> layouts;
  std::vector<ScoreRecord> scores;
  std::vector<ExportRecord> exports;
  std::vector<StepRecord> history;

  const LayoutRecord* find_layout(const std::string& id) const;
  const CandidateSetRecord* find_set(const std::string& id) const;
  bool operator==(const ProjectState&) const = default;
};

void to_json(nlohmann::json& j, const ProjectState& s);
void from_json(const nlohmann::json& j, ProjectState& s);

// ---------------------------------------------------------------------------
// Edits

enum class EditKind { AddLimb, RemoveLimb, MoveLimb, ResizeLimb };

inline constexpr geometry::Length kEditGrid = 50;
inline constexpr geometry::Length kMinLimbLength = 200;

/// JSON forms:
///   {"type": "AddLimb", "start": [x, y], "end": [x, y], "thickness": t}
///   {"type": "RemoveLimb", "limb": i}
///   {"type": "MoveLimb", "limb": i, "dx": dx, "dy": dy}
///   {"type": "ResizeLimb", "limb": i, "length": L, "thickness": t}
/// (ResizeLimb keeps the start point; either field may be omitted.)
struct Edit {
  EditKind kind = EditKind::AddLimb;
  layout::WallLimb limb;
  int index = -1;
  geometry::Length dx = 0;
  geometry::Length dy = 0;
  std::optional<geometry::Length> length;
  std::optional<geometry::Length> thickness;
};

Edit edit_from_json(const nlohmann::json& j);
nlohmann::json edit_to_json(const Edit& e);

/// Pure: the edited graph, junctions recomputed. InvalidGeometry when the
/// touched limb leaves the 50 mm grid, drops below 200 mm, is off the
/// standard thickness set, or the result breaks LayoutGraph invariants.
layout::LayoutGraph apply_edit_to_graph(const layout::LayoutGraph& graph, const Edit& edit);

// ---------------------------------------------------------------------------
// Scores

/// Arithmetic mean rounded to 2 decimals (half away from zero).
double mean_2dp(const std::vector<double>& values);

struct ScoreSummary {
  std::string layout;
  std::map<std::string, double> by_critic;
  std::optional<double> mean;
};

struct EditResult {
  std::string layout_id;
  metrics::MetricReport report;
};

// ---------------------------------------------------------------------------

class Project {
 public:
  /// Ingests `dxf` with `layer_config` and creates <root>/<name> atomically.
  /// DuplicateName when it exists; ingest errors leave nothing behind.
  static Project create(const fs::path& root, const std::string& name, std::string_view dxf,
                        std::string_view layer_config);
  static Project open(const fs::path& root, const std::string& name);
  static std::vector<std::string> list(const fs::path& root);

  const fs::path& dir() const { return dir_; }
  const ProjectState& state() const { return state_; }
  void reload();

  plan::FloorPlan plan() const;
  layout::LayoutGraph layout(const std::string& id) const;
  /// Stored report with s_layout set to the current mean score.
  metrics::MetricReport report(const std::string& id) const;
  std::string read(const std::string& relative) const;

  /// Runs one pipeline step and persists its outputs; returns a summary with
  /// the ids / files produced. Failures leave project.json untouched.
  nlohmann::json run_step(StepKind kind, const nlohmann::json& params = nlohmann::json::object());

  EditResult apply_edit(const std::string& layout_id, const Edit& edit);
  ScoreSummary record_score(const std::string& layout_id, const std::string& critic, double score);
  ScoreSummary scores(const std::string& layout_id) const;
  void set_preferred(const std::string& set_id, int index);
  /// New layout from an edited red-block image; `parent` must exist if given.
  std::string import_redblock(std::string_view png, const std::optional<std::string>& parent);
  /// Serialized layout (s2k / json / png), not persisted.
  std::string export_layout(const std::string& layout_id, std::string_view format) const;

 private:
  explicit Project(fs::path dir);
  template <class F>
  auto mutate(F&& f);

  fs::path dir_;
  ProjectState state_;
};

// ---------------------------------------------------------------------------
// REST API under /api/v1 (see docs/api.md).

struct ServeConfig {
  fs::path root;
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
};

class ApiServer {
 public:
  explicit ApiServer(ServeConfig config);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds (BindFailure on error) and serves on a background thread.
  void start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wallforge::studio
