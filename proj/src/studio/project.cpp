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

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "wallforge/dataset.hpp"
#include "wallforge/diffusion.hpp"
#include "wallforge/error.hpp"
#include "wallforge/export.hpp"
#include "wallforge/studio.hpp"
#include "wallforge/util.hpp"
#include "wallforge/vectorize.hpp"

namespace wallforge::studio {

namespace {

std::atomic<long> g_points{0};
std::atomic<long> g_fail_at{-1};

void persistence_point() {
  const long i = g_points++;
  if (i == g_fail_at.load()) fail(ErrorCode::InjectedFault, "injected fault at persistence point " + std::to_string(i));
}

void write_all(int fd, const char* p, std::size_t n, const fs::path& path) {
  while (n > 0) {
    const ssize_t w = ::write(fd, p, n);
    if (w < 0) fail(ErrorCode::IoFailure, "write failed: " + path.string());
    p += w;
    n -= static_cast<std::size_t>(w);
  }
}

void fsync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
}

}  // namespace

void arm_fault(long n) {
  g_points = 0;
  g_fail_at = n;
}

long persistence_points() { return g_points.load(); }

void atomic_write(const fs::path& path, std::string_view bytes) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  persistence_point();
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) fail(ErrorCode::IoFailure, "cannot create " + tmp.string());
  try {
    const std::size_t half = bytes.size() / 2;
    write_all(fd, bytes.data(), half, tmp);
    persistence_point();  // torn temp file
    write_all(fd, bytes.data() + half, bytes.size() - half, tmp);
    if (::fsync(fd) != 0) fail(ErrorCode::IoFailure, "fsync failed: " + tmp.string());
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  persistence_point();  // complete temp file, target untouched
  if (std::rename(tmp.c_str(), path.c_str()) != 0) fail(ErrorCode::IoFailure, "rename failed: " + path.string());
  fsync_dir(path.parent_path());
  persistence_point();
}

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::Ingest: return "Ingest";
    case StepKind::Rasterize: return "Rasterize";
    case StepKind::BuildDataset: return "BuildDataset";
    case StepKind::Generate: return "Generate";
    case StepKind::Vectorize: return "Vectorize";
    case StepKind::Evaluate: return "Evaluate";
    case StepKind::Export: return "Export";
  }
  return "Ingest";
}

StepKind step_kind_from_string(std::string_view s) {
  for (auto k : {StepKind::Ingest, StepKind::Rasterize, StepKind::BuildDataset, StepKind::Generate,
                 StepKind::Vectorize, StepKind::Evaluate, StepKind::Export}) {
    if (to_string(k) == s) return k;
  }
  fail(ErrorCode::InvalidArgument, "unknown step '" + std::string(s) + "'");
}

const LayoutRecord* ProjectState::find_layout(const std::string& id) const {
  for (const auto& l : layouts)
    if (l.id == id) return &l;
  return nullptr;
}

const CandidateSetRecord* ProjectState::find_set(const std::string& id) const {
  for (const auto& c : candidate_sets)
    if (c.id == id) return &c;
  return nullptr;
}

namespace {

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> get_opt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

void to_json(nlohmann::json& j, const ProjectState& s) {
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& c : s.candidate_sets) {
    sets.push_back({{"id", c.id}, {"file", c.file}, {"images", c.images}, {"seeds", c.seeds},
                    {"preferred", opt(c.preferred)}});
  }
  nlohmann::json layouts = nlohmann::json::array();
  for (const auto& l : s.layouts) {
    layouts.push_back({{"id", l.id}, {"parent", opt(l.parent)}, {"origin", l.origin}, {"edit", l.edit},
                       {"file", l.file}, {"report", opt(l.report)}});
  }
  nlohmann::json scores = nlohmann::json::array();
  for (const auto& r : s.scores) scores.push_back({{"layout", r.layout}, {"critic", r.critic}, {"score", r.score}});
  nlohmann::json exports = nlohmann::json::array();
  for (const auto& e : s.exports) exports.push_back({{"layout", e.layout}, {"format", e.format}, {"file", e.file}});
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : s.history) {
    history.push_back({{"kind", to_string(h.kind)}, {"params", h.params}, {"outputs", h.outputs},
                       {"revision", h.revision}});
  }
  j = nlohmann::json{{"format", "wallforge.project"},
                     {"version", 1},
                     {"name", s.name},
                     {"revision", s.revision},
                     {"source_dxf", s.source_dxf},
                     {"layer_config", s.layer_config},
                     {"plan", opt(s.plan)},
                     {"canvas", s.canvas},
                     {"scale", s.scale},
                     {"condition_png", opt(s.condition_png)},
                     {"target_png", opt(s.target_png)},
                     {"dataset_dir", opt(s.dataset_dir)},
                     {"candidate_sets", sets},
                     {"layouts", layouts},
                     {"scores", scores},
                     {"exports", exports},
                     {"history", history}};
}

void from_json(const nlohmann::json& j, ProjectState& s) {
  if (j.value("format", std::string{}) != "wallforge.project") {
    fail(ErrorCode::IoFailure, "not a wallforge project manifest");
  }
  s = ProjectState{};
  s.name = j.at("name").get<std::string>();
  s.revision = j.at("revision").get<int>();
  s.source_dxf = j.at("source_dxf").get<std::string>();
  s.layer_config = j.at("layer_config").get<std::string>();
  s.plan = get_opt<std::string>(j, "plan");
  s.canvas = j.value("canvas", 512);
  s.scale = j.value("scale", geometry::Length{100});
  s.condition_png = get_opt<std::string>(j, "condition_png");
  s.target_png = get_opt<std::string>(j, "target_png");
  s.dataset_dir = get_opt<std::string>(j, "dataset_dir");
  for (const auto& c : j.at("candidate_sets")) {
    s.candidate_sets.push_back({c.at("id").get<std::string>(), c.at("file").get<std::string>(),
                                c.at("images").get<std::vector<std::string>>(),
                                c.at("seeds").get<std::vector<std::int64_t>>(), get_opt<int>(c, "preferred")});
  }
  for (const auto& l : j.at("layouts")) {
    s.layouts.push_back({l.at("id").get<std::string>(), get_opt<std::string>(l, "parent"),
                         l.at("origin").get<std::string>(), l.value("edit", nlohmann::json()),
                         l.at("file").get<std::string>(), get_opt<std::string>(l, "report")});
  }
  for (const auto& r : j.at("scores")) {
    s.scores.push_back({r.at("layout").get<std::string>(), r.at("critic").get<std::string>(),
                        r.at("score").get<double>()});
  }
  for (const auto& e : j.at("exports")) {
    s.exports.push_back({e.at("layout").get<std::string>(), e.at("format").get<std::string>(),
                         e.at("file").get<std::string>()});
  }
  for (const auto& h : j.at("history")) {
    s.history.push_back({step_kind_from_string(h.at("kind").get<std::string>()), h.at("params"),
                         h.at("outputs").get<std::vector<std::string>>(), h.at("revision").get<int>()});
  }
}

// ---------------------------------------------------------------------------
// Edits

Edit edit_from_json(const nlohmann::json& j) {
  try {
    Edit e;
    const std::string type = j.at("type").get<std::string>();
    auto point = [](const nlohmann::json& p) { return geometry::Point2{p.at(0).get<geometry::Length>(), p.at(1).get<geometry::Length>()}; };
    if (type == "AddLimb") {
      e.kind = EditKind::AddLimb;
      e.limb.start = point(j.at("start"));
      e.limb.end = point(j.at("end"));
      if (e.limb.end < e.limb.start) std::swap(e.limb.start, e.limb.end);
      e.limb.thickness = j.value("thickness", geometry::Length{200});
    } else if (type == "RemoveLimb") {
      e.kind = EditKind::RemoveLimb;
      e.index = j.at("limb").get<int>();
    } else if (type == "MoveLimb") {
      e.kind = EditKind::MoveLimb;
      e.index = j.at("limb").get<int>();
      e.dx = j.value("dx", geometry::Length{0});
      e.dy = j.value("dy", geometry::Length{0});
    } else if (type == "ResizeLimb") {
      e.kind = EditKind::ResizeLimb;
      e.index = j.at("limb").get<int>();
      e.length = get_opt<geometry::Length>(j, "length");
      e.thickness = get_opt<geometry::Length>(j, "thickness");
    } else {
      fail(ErrorCode::InvalidArgument, "unknown edit type '" + type + "'");
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::InvalidArgument, std::string("bad edit: ") + ex.what());
  }
}

nlohmann::json edit_to_json(const Edit& e) {
  switch (e.kind) {
    case EditKind::AddLimb:
      return {{"type", "AddLimb"},
              {"start", {e.limb.start.x, e.limb.start.y}},
              {"end", {e.limb.end.x, e.limb.end.y}},
              {"thickness", e.limb.thickness}};
    case EditKind::RemoveLimb: return {{"type", "RemoveLimb"}, {"limb", e.index}};
    case EditKind::MoveLimb: return {{"type", "MoveLimb"}, {"limb", e.index}, {"dx", e.dx}, {"dy", e.dy}};
    case EditKind::ResizeLimb: {
      nlohmann::json j{{"type", "ResizeLimb"}, {"limb", e.index}};
      if (e.length) j["length"] = *e.length;
      if (e.thickness) j["thickness"] = *e.thickness;
      return j;
    }
  }
  return {};
}

namespace {

void check_limb(const layout::WallLimb& l) {
  auto bad = [](const std::string& m) { fail(ErrorCode::InvalidGeometry, m); };
  if ((l.start.x == l.end.x) == (l.start.y == l.end.y)) bad("limb must be axis-aligned with positive length");
  if (l.length() < kMinLimbLength) bad("limb shorter than " + std::to_string(kMinLimbLength) + " mm");
  const auto& std_t = layout::kStandardThicknesses;
  if (std::find(std_t.begin(), std_t.end(), l.thickness) == std_t.end()) {
    bad("thickness " + std::to_string(l.thickness) + " is not a standard thickness");
  }
  const auto r = l.rect();
  for (auto v : {r.min.x, r.min.y, r.max.x, r.max.y}) {
    if (v % kEditGrid != 0) bad("limb edges must lie on the " + std::to_string(kEditGrid) + " mm grid");
  }
}

}  // namespace

layout::LayoutGraph apply_edit_to_graph(const layout::LayoutGraph& graph, const Edit& edit) {
  layout::LayoutGraph g = graph;
  auto target = [&]() -> layout::WallLimb& {
    if (edit.index < 0 || edit.index >= static_cast<int>(g.limbs.size())) {
      fail(ErrorCode::InvalidGeometry, "no limb " + std::to_string(edit.index));
    }
    return g.limbs[static_cast<std::size_t>(edit.index)];
  };
  switch (edit.kind) {
    case EditKind::AddLimb: {
      layout::WallLimb l = edit.limb;
      check_limb(l);
      int next = 0;
      for (const auto& x : g.limbs) next = std::max(next, x.component_id + 1);
      for (const auto& c : g.columns) next = std::max(next, c.component_id + 1);
      l.component_id = next;
      g.limbs.push_back(l);
      break;
    }
    case EditKind::RemoveLimb:
      target();
      g.limbs.erase(g.limbs.begin() + edit.index);
      break;
    case EditKind::MoveLimb: {
      if (edit.dx % kEditGrid != 0 || edit.dy % kEditGrid != 0) {
        fail(ErrorCode::InvalidGeometry, "moves must be whole " + std::to_string(kEditGrid) + " mm steps");
      }
      auto& l = target();
      l.start = {l.start.x + edit.dx, l.start.y + edit.dy};
      l.end = {l.end.x + edit.dx, l.end.y + edit.dy};
      check_limb(l);
      break;
    }
    case EditKind::ResizeLimb: {
      auto& l = target();
      if (edit.thickness) l.thickness = *edit.thickness;
      if (edit.length) {
        if (*edit.length <= 0) fail(ErrorCode::InvalidGeometry, "length must be positive");
        l.end = l.axis() == geometry::Axis::X ? geometry::Point2{l.start.x + *edit.length, l.start.y}
                                              : geometry::Point2{l.start.x, l.start.y + *edit.length};
      }
      check_limb(l);
      break;
    }
  }
  layout::recompute_junctions(g);
  layout::validate(g);
  return g;
}

double mean_2dp(const std::vector<double>& values) {
  if (values.empty()) fail(ErrorCode::InvalidArgument, "mean of no values");
  double sum = 0;
  for (double v : values) sum += v;
  // Nudge by a few ulps so printed-decimal ties (x.xx5) round up.
  const double m = sum / static_cast<double>(values.size()) * 100.0;
  return std::round(m * (1 + 4 * std::numeric_limits<double>::epsilon())) / 100.0;
}

// ---------------------------------------------------------------------------
// Project

namespace {

class DirLock {
 public:
  explicit DirLock(const fs::path& dir) {
    fd_ = ::open((dir / ".lock").c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) fail(ErrorCode::IoFailure, "cannot open lock in " + dir.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      fail(ErrorCode::IoFailure, "cannot lock " + dir.string());
    }
  }
  ~DirLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

ProjectState load_state(const fs::path& dir) {
  const fs::path manifest = dir / "project.json";
  if (!fs::exists(manifest)) fail(ErrorCode::NotFound, "no project at " + dir.string());
  try {
    return nlohmann::json::parse(util::read_file(manifest)).get<ProjectState>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::IoFailure, "corrupt project manifest " + manifest.string() + ": " + e.what());
  }
}

std::string dump_state(const ProjectState& s) { return nlohmann::json(s).dump(2) + "\n"; }

void check_name(const std::string& name) {
  const bool ok = !name.empty() && name.size() <= 64 && name[0] != '.' &&
                  std::all_of(name.begin(), name.end(), [](unsigned char c) {
                    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
                  });
  if (!ok) fail(ErrorCode::InvalidArgument, "project names use letters, digits, '_', '-', '.' (max 64)");
}

std::string numbered(char prefix, std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%04zu", prefix, n);
  return buf;
}

template <class Rec>
std::string next_id(char prefix, const std::vector<Rec>& recs) {
  std::size_t n = 0;
  for (const auto& r : recs) n = std::max<std::size_t>(n, std::stoul(r.id.substr(1)));
  return numbered(prefix, n + 1);
}

std::string rev_name(const std::string& stem, int rev, const std::string& ext) {
  return stem + "-r" + std::to_string(rev) + ext;
}

void verify_lineage(const ProjectState& s) {
  for (std::size_t i = 0; i < s.layouts.size(); ++i) {
    const auto& l = s.layouts[i];
    if (!l.parent) continue;
    bool earlier = false;
    for (std::size_t k = 0; k < i; ++k) earlier = earlier || s.layouts[k].id == *l.parent;
    if (!earlier) fail(ErrorCode::InvalidGeometry, "layout " + l.id + " has no earlier parent " + *l.parent);
  }
}

metrics::MetricReport evaluate(const layout::LayoutGraph& g, const plan::FloorPlan& p) {
  return metrics::evaluate_layout(g, p.story, p.extent());
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

Project::Project(fs::path dir) : dir_(std::move(dir)) { state_ = load_state(dir_); }

Project Project::open(const fs::path& root, const std::string& name) {
  check_name(name);
  return Project(root / name);
}

std::vector<std::string> Project::list(const fs::path& root) {
  std::vector<std::string> out;
  if (!fs::exists(root)) return out;
  for (const auto& e : fs::directory_iterator(root)) {
    const std::string n = e.path().filename().string();
    if (e.is_directory() && n[0] != '.' && fs::exists(e.path() / "project.json")) out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Project Project::create(const fs::path& root, const std::string& name, std::string_view dxf,
                        std::string_view layer_config) {
  check_name(name);
  const fs::path final_dir = root / name;
  if (fs::exists(final_dir)) fail(ErrorCode::DuplicateName, "project '" + name + "' already exists");
  const plan::FloorPlan plan = plan::ingest(dxf, plan::parse_ingest_config(layer_config));

  fs::create_directories(root);
  const fs::path tmp = root / (".creating-" + name + "-" + std::to_string(::getpid()) + "-" +
                               std::to_string(std::random_device{}()));
  try {
    fs::create_directories(tmp);
    ProjectState s;
    s.name = name;
    s.revision = 1;
    s.source_dxf = "source.dxf";
    s.layer_config = "layers.cfg";
    s.plan = rev_name("plan", 1, ".json");
    s.history.push_back({StepKind::Ingest, nlohmann::json::object(), {*s.plan}, 1});
    atomic_write(tmp / s.source_dxf, dxf);
    atomic_write(tmp / s.layer_config, layer_config);
    atomic_write(tmp / *s.plan, json_text(plan));
    atomic_write(tmp / "project.json", dump_state(s));
    std::error_code ec;
    fs::rename(tmp, final_dir, ec);
    if (ec) {
      fs::remove_all(tmp);
      if (fs::exists(final_dir)) fail(ErrorCode::DuplicateName, "project '" + name + "' already exists");
      fail(ErrorCode::IoFailure, "cannot create " + final_dir.string() + ": " + ec.message());
    }
    fsync_dir(root);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }
  return Project(final_dir);
}

void Project::reload() { state_ = load_state(dir_); }

std::string Project::read(const std::string& relative) const { return util::read_file(dir_ / relative); }

plan::FloorPlan Project::plan() const {
  if (!state_.plan) fail(ErrorCode::DependencyMissing, "project has no ingested plan");
  return nlohmann::json::parse(read(*state_.plan)).get<plan::FloorPlan>();
}

layout::LayoutGraph Project::layout(const std::string& id) const {
  const LayoutRecord* rec = state_.find_layout(id);
  if (!rec) fail(ErrorCode::UnknownLayout, "no layout '" + id + "'");
  return nlohmann::json::parse(read(rec->file)).get<layout::LayoutGraph>();
}

metrics::MetricReport Project::report(const std::string& id) const {
  const LayoutRecord* rec = state_.find_layout(id);
  if (!rec) fail(ErrorCode::UnknownLayout, "no layout '" + id + "'");
  if (!rec->report) fail(ErrorCode::NotFound, "layout '" + id + "' has not been evaluated");
  auto r = nlohmann::json::parse(read(*rec->report)).get<metrics::MetricReport>();
  r.s_layout = scores(id).mean;
  return r;
}

template <class F>
auto Project::mutate(F&& f) {
  DirLock lock(dir_);
  ProjectState s = load_state(dir_);
  s.revision += 1;
  try {
    auto out = f(s);
    verify_lineage(s);
    atomic_write(dir_ / "project.json", dump_state(s));
    state_ = std::move(s);
    return out;
  } catch (...) {
    state_ = load_state(dir_);
    throw;
  }
}

nlohmann::json Project::run_step(StepKind kind, const nlohmann::json& params_in) {
  const nlohmann::json params = params_in.is_null() ? nlohmann::json::object() : params_in;
  if (!params.is_object()) fail(ErrorCode::InvalidArgument, "step parameters must be an object");
  auto record = [&](ProjectState& s, std::vector<std::string> outputs) {
    s.history.push_back({kind, params, std::move(outputs), s.revision});
  };
  auto need_plan = [](const ProjectState& s) {
    if (!s.plan) fail(ErrorCode::DependencyMissing, "run Ingest first");
  };
  auto load_plan = [&](const ProjectState& s) {
    need_plan(s);
    return nlohmann::json::parse(util::read_file(dir_ / *s.plan)).get<plan::FloorPlan>();
  };

  switch (kind) {
    case StepKind::Ingest:
      return mutate([&](ProjectState& s) {
        std::string cfg_text = params.contains("layers") ? params["layers"].get<std::string>()
                                                         : util::read_file(dir_ / s.layer_config);
        const plan::FloorPlan p = plan::ingest(util::read_file(dir_ / s.source_dxf), plan::parse_ingest_config(cfg_text));
        std::vector<std::string> outs;
        if (params.contains("layers")) {
          s.layer_config = rev_name("layers", s.revision, ".cfg");
          atomic_write(dir_ / s.layer_config, cfg_text);
          outs.push_back(s.layer_config);
        }
        s.plan = rev_name("plan", s.revision, ".json");
        atomic_write(dir_ / *s.plan, json_text(p));
        s.condition_png.reset();
        s.target_png.reset();
        outs.push_back(*s.plan);
        record(s, outs);
        return nlohmann::json{{"plan", *s.plan},
                              {"arch_walls", p.arch_walls.size()},
                              {"openings", p.openings.size()},
                              {"shear_walls", p.shear_walls.size()}};
      });

    case StepKind::Rasterize:
      return mutate([&](ProjectState& s) {
        const plan::FloorPlan p = load_plan(s);
        const int canvas = params.value("canvas", s.canvas);
        const geometry::Length scale = params.value("scale", s.scale);
        const auto cond = raster::rasterize_plan(p, false, canvas, scale);
        s.canvas = canvas;
        s.scale = scale;
        s.condition_png = "rasters/" + rev_name("condition", s.revision, ".png");
        atomic_write(dir_ / *s.condition_png, raster::encode_png(cond));
        std::vector<std::string> outs{*s.condition_png};
        s.target_png.reset();
        if (!p.shear_walls.empty()) {
          s.target_png = "rasters/" + rev_name("target", s.revision, ".png");
          atomic_write(dir_ / *s.target_png, raster::encode_png(raster::rasterize_plan(p, true, canvas, scale)));
          outs.push_back(*s.target_png);
        }
        record(s, outs);
        return nlohmann::json{{"condition", *s.condition_png}, {"target", opt(s.target_png)}};
      });

    case StepKind::BuildDataset:
      return mutate([&](ProjectState& s) {
        const plan::FloorPlan p = load_plan(s);
        const std::string caption = params.value("caption", p.story.seismic_label);
        std::vector<plan::FloorPlan> plans;
        if (!p.shear_walls.empty()) plans.push_back(p);
        if (params.contains("extra_dxf")) {
          const auto cfg = plan::parse_ingest_config(util::read_file(dir_ / s.layer_config));
          for (const auto& path : params["extra_dxf"]) {
            plans.push_back(plan::ingest(util::read_file(path.get<std::string>()), cfg));
          }
        }
        if (plans.empty()) fail(ErrorCode::NoShearWalls, "no plan with shear walls to train on");
        const std::string rel = rev_name("dataset", s.revision, "");
        std::error_code ec;
        fs::remove_all(dir_ / rel, ec);
        persistence_point();
        const auto manifest = dataset::build_dataset(plans, caption, dir_ / rel, params.value("canvas", s.canvas),
                                                     params.value("scale", s.scale));
        dataset::TrainerOverrides o;
        o.epochs = get_opt<int>(params, "epochs");
        o.steps_per_epoch = get_opt<int>(params, "steps_per_epoch");
        o.output_name = get_opt<std::string>(params, "output_name");
        dataset::emit_trainer_config(manifest, o);
        fsync_dir(dir_ / rel);
        persistence_point();
        s.dataset_dir = rel;
        record(s, {rel});
        return nlohmann::json{{"dataset", rel}, {"pairs", manifest.entries.size()}, {"warnings", manifest.warnings}};
      });

    case StepKind::Generate: {
      // The HTTP call runs without the project lock; only the commit takes it.
      const ProjectState snap = load_state(dir_);
      if (!snap.condition_png) fail(ErrorCode::DependencyMissing, "run Rasterize first");
      const plan::FloorPlan p = load_plan(snap);
      diffusion::GenerationRequest req;
      req.condition_image = raster::from_rgb_exact(raster::decode_png(util::read_file(dir_ / *snap.condition_png)),
                                                   raster::frame_for_extent(p.extent(), snap.canvas, snap.scale));
      req.prompt = params.value("prompt", p.story.seismic_label);
      req.negative_prompt = params.value("negative_prompt", req.negative_prompt);
      req.lora_name = params.value("lora", req.lora_name);
      req.lora_weight = params.value("lora_weight", req.lora_weight);
      req.sampler = params.value("sampler", req.sampler);
      req.steps = params.value("steps", req.steps);
      req.cfg_scale = params.value("cfg_scale", req.cfg_scale);
      req.batch = params.value("batch", req.batch);
      req.control_weight = params.value("control_weight", req.control_weight);
      req.denoising_strength = params.value("denoising_strength", req.denoising_strength);
      if (params.contains("seed") && params["seed"].is_number_integer()) req.seed = params["seed"].get<std::int64_t>();
      diffusion::ApiEndpoint ep;
      const char* env = std::getenv("WALLFORGE_SD_URL");
      ep.base_url = params.value("api", std::string(env && *env ? env : ep.base_url.c_str()));
      ep.timeout = std::chrono::milliseconds(params.value("timeout_ms", static_cast<long>(ep.timeout.count())));
      const diffusion::CandidateSet set = diffusion::generate_candidates(ep, req);

      return mutate([&](ProjectState& s) {
        if (!s.condition_png) fail(ErrorCode::DependencyMissing, "run Rasterize first");
        CandidateSetRecord rec;
        rec.id = next_id('C', s.candidate_sets);
        rec.file = "candidates/" + rec.id + ".json";
        std::vector<std::string> outs{rec.file};
        atomic_write(dir_ / rec.file, nlohmann::json(set).dump() + "\n");
        for (const auto& c : set.candidates) {
          rec.images.push_back("candidates/" + rec.id + "_" + std::to_string(c.id) + ".png");
          rec.seeds.push_back(c.seed);
          atomic_write(dir_ / rec.images.back(), raster::encode_png(c.raster));
          outs.push_back(rec.images.back());
        }
        s.candidate_sets.push_back(rec);
        nlohmann::json p = params;
        p["api"] = ep.base_url;
        s.history.push_back({kind, p, outs, s.revision});
        return nlohmann::json{{"set", rec.id}, {"count", set.candidates.size()}, {"seeds", rec.seeds}};
      });
    }

    case StepKind::Vectorize:
      return mutate([&](ProjectState& s) {
        if (s.candidate_sets.empty()) fail(ErrorCode::DependencyMissing, "run Generate first");
        const std::string set_id = params.value("set", s.candidate_sets.back().id);
        const CandidateSetRecord* rec = s.find_set(set_id);
        if (!rec) fail(ErrorCode::NotFound, "no candidate set '" + set_id + "'");
        const auto set = nlohmann::json::parse(util::read_file(dir_ / rec->file)).get<diffusion::CandidateSet>();
        std::vector<int> indices;
        if (params.contains("indices")) {
          indices = params["indices"].get<std::vector<int>>();
        } else {
          for (const auto& c : set.candidates) indices.push_back(c.id);
        }
        std::vector<std::string> ids;
        for (int i : indices) {
          if (i < 0 || i >= static_cast<int>(set.candidates.size())) {
            fail(ErrorCode::OutOfRange, "candidate " + std::to_string(i) + " not in " + set_id);
          }
          const std::string origin = set_id + "/" + std::to_string(i);
          const auto g = vectorize::vectorize(set.candidates[static_cast<std::size_t>(i)].raster, origin).graph;
          LayoutRecord l;
          l.id = next_id('L', s.layouts);
          l.origin = origin;
          l.file = "layouts/" + l.id + ".json";
          atomic_write(dir_ / l.file, json_text(g));
          s.layouts.push_back(l);
          ids.push_back(l.id);
        }
        std::vector<std::string> outs;
        for (const auto& id : ids) outs.push_back("layouts/" + id + ".json");
        record(s, outs);
        return nlohmann::json{{"layouts", ids}};
      });

    case StepKind::Evaluate:
      return mutate([&](ProjectState& s) {
        if (s.layouts.empty()) fail(ErrorCode::DependencyMissing, "run Vectorize first");
        const plan::FloorPlan p = load_plan(s);
        std::vector<std::string> ids;
        if (params.contains("layouts")) {
          ids = params["layouts"].get<std::vector<std::string>>();
        } else {
          for (const auto& l : s.layouts)
            if (!l.report) ids.push_back(l.id);
        }
        std::vector<std::string> outs;
        nlohmann::json reports = nlohmann::json::object();
        for (const auto& id : ids) {
          auto it = std::find_if(s.layouts.begin(), s.layouts.end(), [&](const LayoutRecord& l) { return l.id == id; });
          if (it == s.layouts.end()) fail(ErrorCode::UnknownLayout, "no layout '" + id + "'");
          const auto g = nlohmann::json::parse(util::read_file(dir_ / it->file)).get<layout::LayoutGraph>();
          const metrics::MetricReport r = evaluate(g, p);
          it->report = "reports/" + rev_name(id, s.revision, ".json");
          atomic_write(dir_ / *it->report, json_text(r));
          outs.push_back(*it->report);
          reports[id] = r;
        }
        record(s, outs);
        return nlohmann::json{{"reports", reports}};
      });

    case StepKind::Export:
      return mutate([&](ProjectState& s) {
        if (s.layouts.empty()) fail(ErrorCode::DependencyMissing, "no layout to export");
        const std::string id = params.value("layout", s.layouts.back().id);
        const std::string format = params.value("format", std::string("json"));
        state_ = s;
        const std::string bytes = export_layout(id, format);
        const std::string ext = format == "png" ? ".png" : format == "s2k" ? ".s2k" : ".json";
        const std::string file = "exports/" + rev_name(id, s.revision, ext);
        atomic_write(dir_ / file, bytes);
        s.exports.push_back({id, format, file});
        record(s, {file});
        return nlohmann::json{{"file", file}, {"bytes", bytes.size()}};
      });
  }
  fail(ErrorCode::InvalidArgument, "unknown step");
}

EditResult Project::apply_edit(const std::string& layout_id, const Edit& edit) {
  return mutate([&](ProjectState& s) {
    const LayoutRecord* parent = s.find_layout(layout_id);
    if (!parent) fail(ErrorCode::UnknownLayout, "no layout '" + layout_id + "'");
    const auto g = nlohmann::json::parse(util::read_file(dir_ / parent->file)).get<layout::LayoutGraph>();
    layout::LayoutGraph child = apply_edit_to_graph(g, edit);
    child.source = "edit:" + layout_id;
    const plan::FloorPlan p = nlohmann::json::parse(util::read_file(dir_ / *s.plan)).get<plan::FloorPlan>();
    const metrics::MetricReport r = evaluate(child, p);
    LayoutRecord l;
    l.id = next_id('L', s.layouts);
    l.parent = layout_id;
    l.origin = "edit";
    l.edit = edit_to_json(edit);
    l.file = "layouts/" + l.id + ".json";
    l.report = "reports/" + rev_name(l.id, s.revision, ".json");
    atomic_write(dir_ / l.file, json_text(child));
    atomic_write(dir_ / *l.report, json_text(r));
    s.layouts.push_back(l);
    return EditResult{l.id, r};
  });
}

ScoreSummary Project::scores(const std::string& layout_id) const {
  if (!state_.find_layout(layout_id)) fail(ErrorCode::UnknownLayout, "no layout '" + layout_id + "'");
  ScoreSummary out;
  out.layout = layout_id;
  std::vector<double> v;
  for (const auto& r : state_.scores) {
    if (r.layout == layout_id) {
      out.by_critic[r.critic] = r.score;
      v.push_back(r.score);
    }
  }
  if (!v.empty()) out.mean = mean_2dp(v);
  return out;
}

ScoreSummary Project::record_score(const std::string& layout_id, const std::string& critic, double score) {
  if (!(score >= 0.0 && score <= 10.0)) fail(ErrorCode::OutOfRange, "score must be in [0, 10]");
  if (critic.empty()) fail(ErrorCode::InvalidArgument, "critic id must not be empty");
  mutate([&](ProjectState& s) {
    if (!s.find_layout(layout_id)) fail(ErrorCode::UnknownLayout, "no layout '" + layout_id + "'");
    auto it = std::find_if(s.scores.begin(), s.scores.end(),
                           [&](const ScoreRecord& r) { return r.layout == layout_id && r.critic == critic; });
    if (it != s.scores.end()) {
      it->score = score;
    } else {
      s.scores.push_back({layout_id, critic, score});
    }
    return 0;
  });
  return scores(layout_id);
}

void Project::set_preferred(const std::string& set_id, int index) {
  mutate([&](ProjectState& s) {
    auto it = std::find_if(s.candidate_sets.begin(), s.candidate_sets.end(),
                           [&](const CandidateSetRecord& c) { return c.id == set_id; });
    if (it == s.candidate_sets.end()) fail(ErrorCode::NotFound, "no candidate set '" + set_id + "'");
    if (index < 0 || index >= static_cast<int>(it->images.size())) {
      fail(ErrorCode::OutOfRange, "candidate " + std::to_string(index) + " not in " + set_id);
    }
    it->preferred = index;
    return 0;
  });
}

std::string Project::import_redblock(std::string_view png, const std::optional<std::string>& parent) {
  return mutate([&](ProjectState& s) {
    if (parent && !s.find_layout(*parent)) fail(ErrorCode::UnknownLayout, "no layout '" + *parent + "'");
    if (!s.plan) fail(ErrorCode::DependencyMissing, "run Ingest first");
    const plan::FloorPlan p = nlohmann::json::parse(util::read_file(dir_ / *s.plan)).get<plan::FloorPlan>();
    layout::LayoutGraph g = exporter::import_redblock(png, p, s.canvas, s.scale);
    LayoutRecord l;
    l.id = next_id('L', s.layouts);
    l.parent = parent;
    l.origin = "redblock";
    l.file = "layouts/" + l.id + ".json";
    l.report = "reports/" + rev_name(l.id, s.revision, ".json");
    g.source = "redblock";
    atomic_write(dir_ / l.file, json_text(g));
    atomic_write(dir_ / *l.report, json_text(evaluate(g, p)));
    s.layouts.push_back(l);
    return l.id;
  });
}

std::string Project::export_layout(const std::string& layout_id, std::string_view format) const {
  const layout::LayoutGraph g = layout(layout_id);
  const plan::FloorPlan p = plan();
  if (format == "png") return exporter::export_redblock(p, g, state_.canvas);
  const auto f = exporter::solver_format_from_string(format);
  return exporter::export_solver_model(metrics::build_structural_model(g, p.story, p.extent()), f);
}

}  // namespace wallforge::studio
