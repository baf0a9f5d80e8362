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

// wallforge command line. Talks to the library through the C API only.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wallforge/wallforge.h"

using nlohmann::json;

namespace {

struct DomainError {
  wf_status status;
};

struct FileError {
  std::string message;
};

void check(wf_status s) {
  if (s != WF_OK) throw DomainError{s};
}

std::string take(char* p) {
  std::string s = p ? p : "";
  wf_free(p);
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

struct Session {
  std::string root = env_or("WALLFORGE_ROOT", ".");
  std::string name = "default";

  wf_project* open() const {
    wf_project* p = nullptr;
    check(wf_project_open(root.c_str(), name.c_str(), &p));
    return p;
  }
};

class ProjectHandle {
 public:
  explicit ProjectHandle(const Session& s) : p_(s.open()) {}
  ~ProjectHandle() { wf_project_close(p_); }
  ProjectHandle(const ProjectHandle&) = delete;
  ProjectHandle& operator=(const ProjectHandle&) = delete;
  wf_project* get() const { return p_; }

  json step(const char* kind, const json& params) const {
    char* out = nullptr;
    check(wf_project_run_step(p_, kind, params.dump().c_str(), &out));
    return json::parse(take(out));
  }

 private:
  wf_project* p_;
};

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

volatile std::sig_atomic_t g_stop = 0;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wallforge: shear-wall layout assistant"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wf_version());
  Session session;
  app.add_option("--root", session.root, "Project root directory (env WALLFORGE_ROOT)");
  app.add_option("-p,--project", session.name, "Project name");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Create a project from a DXF plan");
  std::string dxf_path, layers_path;
  ingest->add_option("dxf", dxf_path, "DXF file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--layers", layers_path, "Layer config file")->required()->check(CLI::ExistingFile);
  ingest->callback([&] {
    wf_project* p = nullptr;
    check(wf_project_create(session.root.c_str(), session.name.c_str(), dxf_path.c_str(), layers_path.c_str(), &p));
    char* out = nullptr;
    const wf_status s = wf_project_state(p, &out);
    wf_project_close(p);
    check(s);
    const json state = json::parse(take(out));
    print({{"project", state.at("name")}, {"plan", state.at("plan")}});
  });

  // rasterize
  auto* rasterize = app.add_subcommand("rasterize", "Render condition and target images");
  std::optional<int> canvas, scale;
  rasterize->add_option("--canvas", canvas, "Canvas size in pixels")->check(CLI::Range(16, 4096));
  rasterize->add_option("--scale", scale, "Millimetres per pixel")->check(CLI::Range(1, 10000));
  rasterize->callback([&] {
    json params = json::object();
    if (canvas) params["canvas"] = *canvas;
    if (scale) params["scale"] = *scale;
    print(ProjectHandle(session).step("Rasterize", params));
  });

  // dataset build
  auto* dataset = app.add_subcommand("dataset", "Training-set commands");
  dataset->require_subcommand(1);
  auto* build = dataset->add_subcommand("build", "Build the LoRA training set");
  std::optional<std::string> caption;
  std::vector<std::string> extra;
  std::optional<int> epochs, steps_per_epoch;
  build->add_option("--caption", caption, "Caption for every image");
  build->add_option("--extra", extra, "Additional DXF plans")->check(CLI::ExistingFile);
  build->add_option("--epochs", epochs)->check(CLI::PositiveNumber);
  build->add_option("--steps-per-epoch", steps_per_epoch)->check(CLI::PositiveNumber);
  build->callback([&] {
    json params = json::object();
    if (caption) params["caption"] = *caption;
    if (!extra.empty()) params["extra_dxf"] = extra;
    if (epochs) params["epochs"] = *epochs;
    if (steps_per_epoch) params["steps_per_epoch"] = *steps_per_epoch;
    print(ProjectHandle(session).step("BuildDataset", params));
  });

  // generate
  auto* generate = app.add_subcommand("generate", "Request candidates from the diffusion server");
  std::string api = env_or("WALLFORGE_SD_URL", "http://127.0.0.1:7860");
  std::optional<std::string> lora, sampler, prompt, negative;
  std::optional<int> batch, steps;
  std::optional<long long> seed;
  std::optional<double> lora_weight, cfg, control_weight;
  std::optional<long> timeout_ms;
  generate->add_option("--api", api, "Web-UI base URL (env WALLFORGE_SD_URL)");
  generate->add_option("--lora", lora);
  generate->add_option("--lora-weight", lora_weight);
  generate->add_option("--batch", batch)->check(CLI::Range(1, 16));
  generate->add_option("--seed", seed);
  generate->add_option("--sampler", sampler);
  generate->add_option("--steps", steps)->check(CLI::Range(1, 150));
  generate->add_option("--cfg", cfg);
  generate->add_option("--control-weight", control_weight);
  generate->add_option("--prompt", prompt);
  generate->add_option("--negative", negative);
  generate->add_option("--timeout-ms", timeout_ms)->check(CLI::PositiveNumber);
  generate->callback([&] {
    json params{{"api", api}};
    if (lora) params["lora"] = *lora;
    if (lora_weight) params["lora_weight"] = *lora_weight;
    if (batch) params["batch"] = *batch;
    if (seed) params["seed"] = *seed;
    if (sampler) params["sampler"] = *sampler;
    if (steps) params["steps"] = *steps;
    if (cfg) params["cfg_scale"] = *cfg;
    if (control_weight) params["control_weight"] = *control_weight;
    if (prompt) params["prompt"] = *prompt;
    if (negative) params["negative_prompt"] = *negative;
    if (timeout_ms) params["timeout_ms"] = *timeout_ms;
    print(ProjectHandle(session).step("Generate", params));
  });

  // vectorize
  auto* vectorize = app.add_subcommand("vectorize", "Convert candidates to layouts");
  std::string candidate;
  vectorize->add_option("candidate", candidate, "Candidate set (C0001) or one image (C0001/2)")->required();
  vectorize->callback([&] {
    json params = json::object();
    const auto slash = candidate.find('/');
    params["set"] = candidate.substr(0, slash);
    if (slash != std::string::npos) {
      try {
        params["indices"] = json::array({std::stoi(candidate.substr(slash + 1))});
      } catch (const std::exception&) {
        throw CLI::ValidationError("candidate", "expected <set>/<index>");
      }
    }
    print(ProjectHandle(session).step("Vectorize", params));
  });

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Compute the metric report for a layout");
  std::string eval_layout;
  bool as_json = false;
  evaluate->add_option("layout", eval_layout, "Layout id")->required();
  evaluate->add_flag("--json", as_json, "Print the report as JSON");
  evaluate->callback([&] {
    ProjectHandle p(session);
    p.step("Evaluate", {{"layouts", json::array({eval_layout})}});
    char* report = nullptr;
    check(wf_project_report(p.get(), eval_layout.c_str(), &report));
    const std::string r = take(report);
    if (as_json) {
      print(json::parse(r));
      return;
    }
    char* table = nullptr;
    check(wf_render_report(r.c_str(), &table));
    std::cout << take(table);
  });

  // export
  auto* exp = app.add_subcommand("export", "Export a layout");
  std::string exp_layout, format = "json", output;
  exp->add_option("layout", exp_layout, "Layout id")->required();
  exp->add_option("--format", format, "s2k, json or png")->check(CLI::IsMember({"s2k", "json", "png"}));
  exp->add_option("-o,--output", output, "Write here instead of the project exports/ directory");
  exp->callback([&] {
    ProjectHandle p(session);
    if (output.empty()) {
      print(p.step("Export", {{"layout", exp_layout}, {"format", format}}));
      return;
    }
    char* bytes = nullptr;
    size_t len = 0;
    check(wf_project_export(p.get(), exp_layout.c_str(), format.c_str(), &bytes, &len));
    std::ofstream out(output, std::ios::binary);
    out.write(bytes, static_cast<std::streamsize>(len));
    wf_free(bytes);
    if (!out) throw FileError{"cannot write " + output};
    print({{"file", output}, {"bytes", len}});
  });

  // edit
  auto* edit = app.add_subcommand("edit", "Apply one edit, creating a child layout");
  std::string edit_layout, edit_json;
  edit->add_option("layout", edit_layout, "Parent layout id")->required();
  edit->add_option("edit", edit_json, R"(Edit as JSON, e.g. {"type":"RemoveLimb","limb":0})")->required();
  edit->callback([&] {
    ProjectHandle p(session);
    char* out = nullptr;
    check(wf_project_apply_edit(p.get(), edit_layout.c_str(), edit_json.c_str(), &out));
    print(json::parse(take(out)));
  });

  // score
  auto* score = app.add_subcommand("score", "Record a critic score (0-10)");
  std::string score_layout, critic;
  double value = 0;
  score->add_option("layout", score_layout)->required();
  score->add_option("--critic", critic)->required();
  score->add_option("--score", value)->required();
  score->callback([&] {
    ProjectHandle p(session);
    char* out = nullptr;
    check(wf_project_record_score(p.get(), score_layout.c_str(), critic.c_str(), value, &out));
    print(json::parse(take(out)));
  });

  // import
  auto* import = app.add_subcommand("import", "Read an edited red-block image back as a layout");
  std::string png_path;
  std::optional<std::string> parent;
  import->add_option("png", png_path)->required()->check(CLI::ExistingFile);
  import->add_option("--parent", parent, "Layout the image was derived from");
  import->callback([&] {
    ProjectHandle p(session);
    const std::string png = slurp(png_path);
    char* id = nullptr;
    check(wf_project_import_redblock(p.get(), png.data(), png.size(), parent ? parent->c_str() : nullptr, &id));
    print({{"layout", take(id)}});
  });

  // status
  auto* status = app.add_subcommand("status", "Print the project manifest");
  status->callback([&] {
    ProjectHandle p(session);
    char* out = nullptr;
    check(wf_project_state(p.get(), &out));
    print(json::parse(take(out)));
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the REST API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", host);
  serve->callback([&] {
    wf_server* server = nullptr;
    check(wf_server_create(session.root.c_str(), host.c_str(), port, &server));
    const wf_status s = wf_server_start(server);
    if (s != WF_OK) {
      wf_server_destroy(server);
      check(s);
    }
    std::signal(SIGINT, [](int) { g_stop = 1; });
    std::signal(SIGTERM, [](int) { g_stop = 1; });
    std::cerr << "serving " << session.root << " on http://" << host << ":" << wf_server_port(server) << "/api/v1\n";
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    wf_server_stop(server);
    wf_server_destroy(server);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << wf_status_name(e.status) << ": " << wf_last_error() << "\n";
    return 1;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 1;
  }
  return 0;
}
