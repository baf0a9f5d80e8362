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

#include <cstdlib>
#include <cstring>

#include "wallforge/error.hpp"
#include "wallforge/metrics.hpp"
#include "wallforge/studio.hpp"
#include "wallforge/util.hpp"
#include "wallforge/vectorize.hpp"
#include "wallforge/wallforge.h"

using namespace wallforge;
using nlohmann::json;

struct wf_project {
  studio::Project project;
};

struct wf_server {
  studio::ApiServer server;
};

namespace {

thread_local std::string t_last_error;

template <class F>
wf_status guard(F&& f) {
  try {
    f();
    return WF_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return static_cast<wf_status>(static_cast<int>(e.code()));
  } catch (const json::exception& e) {
    t_last_error = std::string("invalid JSON: ") + e.what();
    return WF_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return WF_INTERNAL;
  } catch (...) {
    t_last_error = "unknown exception";
    return WF_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(std::string_view s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void put(char** out, std::string_view s) {
  need(out, "output pointer");
  *out = dup(s);
}

void put_json(char** out, const json& j) { put(out, j.dump()); }

json parse(const char* text, const char* what) {
  need(text, what);
  return json::parse(text);
}

}  // namespace

extern "C" {

const char* wf_version(void) { return "0.1.0"; }

const char* wf_status_name(wf_status status) {
  if (status == WF_OK) return "Ok";
  if (status == WF_INTERNAL) return "Internal";
  const int s = static_cast<int>(status);
  if (s < 1 || s > static_cast<int>(ErrorCode::InjectedFault)) return "Unknown";
  return to_string(static_cast<ErrorCode>(s)).data();
}

const char* wf_last_error(void) { return t_last_error.c_str(); }

void wf_free(void* p) { std::free(p); }

wf_status wf_ingest(const char* dxf, size_t dxf_len, const char* layer_config, char** plan_json) {
  return guard([&] {
    need(dxf, "dxf");
    need(layer_config, "layer_config");
    put_json(plan_json, plan::ingest(std::string_view(dxf, dxf_len), plan::parse_ingest_config(layer_config)));
  });
}

wf_status wf_vectorize_png(const char* png, size_t png_len, const char* plan_json, int canvas, int scale,
                           const char* source, char** layout_json) {
  return guard([&] {
    need(png, "png");
    const auto plan = parse(plan_json, "plan_json").get<plan::FloorPlan>();
    const auto frame = raster::frame_for_extent(plan.extent(), canvas, scale);
    const auto image = raster::decode_png(std::string_view(png, png_len));
    if (image.width != frame.width || image.height != frame.height) {
      fail(ErrorCode::DimensionMismatch, "image is " + std::to_string(image.width) + "x" +
                                             std::to_string(image.height) + ", frame is " +
                                             std::to_string(frame.width) + "x" + std::to_string(frame.height));
    }
    const auto r = vectorize::vectorize(vectorize::classify_pixels(image, frame), source ? source : "");
    put_json(layout_json, r.graph);
  });
}

wf_status wf_evaluate(const char* layout_json, const char* plan_json, char** report_json) {
  return guard([&] {
    auto g = parse(layout_json, "layout_json").get<layout::LayoutGraph>();
    layout::recompute_junctions(g);
    layout::validate(g);
    const auto plan = parse(plan_json, "plan_json").get<plan::FloorPlan>();
    put_json(report_json, metrics::evaluate_layout(g, plan.story, plan.extent()));
  });
}

wf_status wf_render_report(const char* report_json, char** text) {
  return guard([&] { put(text, metrics::render_table(parse(report_json, "report_json").get<metrics::MetricReport>())); });
}

wf_status wf_evaluate_limits(double drift_reciprocal, double r_torsion, double r_period, char** flags_json) {
  return guard([&] {
    const auto f = metrics::evaluate_limits(drift_reciprocal, r_torsion, r_period);
    put_json(flags_json, {{"drift", metrics::to_string(f.drift)},
                          {"torsion", metrics::to_string(f.torsion)},
                          {"period", metrics::to_string(f.period)}});
  });
}

wf_status wf_project_create(const char* root, const char* name, const char* dxf_path, const char* layer_config_path,
                            wf_project** out) {
  return guard([&] {
    need(root, "root");
    need(name, "name");
    need(dxf_path, "dxf_path");
    need(layer_config_path, "layer_config_path");
    need(out, "out");
    auto p = studio::Project::create(root, name, util::read_file(dxf_path), util::read_file(layer_config_path));
    *out = new wf_project{std::move(p)};
  });
}

wf_status wf_project_open(const char* root, const char* name, wf_project** out) {
  return guard([&] {
    need(root, "root");
    need(name, "name");
    need(out, "out");
    *out = new wf_project{studio::Project::open(root, name)};
  });
}

void wf_project_close(wf_project* project) { delete project; }

wf_status wf_project_list(const char* root, char** names_json) {
  return guard([&] {
    need(root, "root");
    put_json(names_json, studio::Project::list(root));
  });
}

wf_status wf_project_state(wf_project* project, char** state_json) {
  return guard([&] {
    need(project, "project");
    project->project.reload();
    put_json(state_json, project->project.state());
  });
}

wf_status wf_project_run_step(wf_project* project, const char* kind, const char* params_json, char** result_json) {
  return guard([&] {
    need(project, "project");
    need(kind, "kind");
    const json params = params_json ? json::parse(params_json) : json::object();
    put_json(result_json, project->project.run_step(studio::step_kind_from_string(kind), params));
  });
}

wf_status wf_project_layout(wf_project* project, const char* layout_id, char** layout_json) {
  return guard([&] {
    need(project, "project");
    need(layout_id, "layout_id");
    project->project.reload();
    put_json(layout_json, project->project.layout(layout_id));
  });
}

wf_status wf_project_report(wf_project* project, const char* layout_id, char** report_json) {
  return guard([&] {
    need(project, "project");
    need(layout_id, "layout_id");
    project->project.reload();
    put_json(report_json, project->project.report(layout_id));
  });
}

wf_status wf_project_apply_edit(wf_project* project, const char* layout_id, const char* edit_json,
                                char** result_json) {
  return guard([&] {
    need(project, "project");
    need(layout_id, "layout_id");
    const auto r = project->project.apply_edit(layout_id, studio::edit_from_json(parse(edit_json, "edit_json")));
    put_json(result_json, {{"layout", r.layout_id}, {"report", r.report}});
  });
}

wf_status wf_project_record_score(wf_project* project, const char* layout_id, const char* critic, double score,
                                  char** result_json) {
  return guard([&] {
    need(project, "project");
    need(layout_id, "layout_id");
    need(critic, "critic");
    const auto s = project->project.record_score(layout_id, critic, score);
    put_json(result_json, {{"layout", s.layout}, {"by_critic", s.by_critic}, {"mean", s.mean ? json(*s.mean) : json()}});
  });
}

wf_status wf_project_set_preferred(wf_project* project, const char* set_id, int index) {
  return guard([&] {
    need(project, "project");
    need(set_id, "set_id");
    project->project.set_preferred(set_id, index);
  });
}

wf_status wf_project_import_redblock(wf_project* project, const char* png, size_t png_len, const char* parent_id,
                                     char** layout_id) {
  return guard([&] {
    need(project, "project");
    need(png, "png");
    std::optional<std::string> parent;
    if (parent_id) parent = parent_id;
    put(layout_id, project->project.import_redblock(std::string_view(png, png_len), parent));
  });
}

wf_status wf_project_export(wf_project* project, const char* layout_id, const char* format, char** bytes,
                            size_t* len) {
  return guard([&] {
    need(project, "project");
    need(layout_id, "layout_id");
    need(format, "format");
    need(len, "len");
    project->project.reload();
    const std::string out = project->project.export_layout(layout_id, format);
    put(bytes, out);
    *len = out.size();
  });
}

wf_status wf_server_create(const char* root, const char* host, int port, wf_server** out) {
  return guard([&] {
    need(root, "root");
    need(out, "out");
    *out = new wf_server{studio::ApiServer({root, host ? host : "127.0.0.1", port})};
  });
}

wf_status wf_server_start(wf_server* server) {
  return guard([&] {
    need(server, "server");
    server->server.start();
  });
}

wf_status wf_server_run(wf_server* server) {
  return guard([&] {
    need(server, "server");
    server->server.run();
  });
}

int wf_server_port(const wf_server* server) { return server ? server->server.port() : 0; }

void wf_server_stop(wf_server* server) {
  if (server) server->server.stop();
}

void wf_server_destroy(wf_server* server) { delete server; }

}  // extern "C"
