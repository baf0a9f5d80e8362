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

#include <atomic>
#include <mutex>
#include <thread>

#include "wallforge/error.hpp"
#include "wallforge/studio.hpp"
#include "wallforge/util.hpp"

// after Eigen: resolv.h defines _res
#include "httplib.h"

namespace wallforge::studio {

namespace {

using nlohmann::json;

int status_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutOfRange:
    case ErrorCode::InvalidGeometry:
    case ErrorCode::MalformedDxf:
    case ErrorCode::UnsupportedVersion:
    case ErrorCode::InvalidLayerMap:
    case ErrorCode::NoOutline:
    case ErrorCode::NonOrthogonalWall:
    case ErrorCode::PlanTooLarge:
    case ErrorCode::NoShearWalls:
    case ErrorCode::InvalidOverride:
    case ErrorCode::GridTooLarge:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::DecodeFailure:
      return 422;
    case ErrorCode::NotFound:
    case ErrorCode::UnknownLayout:
      return 404;
    case ErrorCode::DuplicateName:
    case ErrorCode::DependencyMissing:
      return 409;
    case ErrorCode::Unreachable:
    case ErrorCode::ApiError:
    case ErrorCode::MalformedResponse:
      return 502;
    default:
      return 500;
  }
}

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

json body_of(const httplib::Request& req) {
  try {
    json j = json::parse(req.body.empty() ? std::string("{}") : req.body);
    if (!j.is_object()) fail(ErrorCode::InvalidArgument, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidArgument, std::string("request body is not JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::InvalidArgument, std::string("field '") + key + "' has the wrong type");
  }
}

json layout_summary(const Project& p, const LayoutRecord& l) {
  json j{{"id", l.id}, {"parent", l.parent ? json(*l.parent) : json(nullptr)}, {"origin", l.origin},
         {"edit", l.edit}, {"evaluated", l.report.has_value()}};
  if (l.report) {
    const auto r = p.report(l.id);
    j["n_short"] = r.n_short;
    j["l_wall"] = r.l_wall;
  }
  return j;
}

json set_summary(const Project& p, const CandidateSetRecord& c) {
  json cands = json::array();
  for (std::size_t i = 0; i < c.images.size(); ++i) {
    json e{{"index", i}, {"seed", c.seeds[i]}, {"image", c.id + "/" + std::to_string(i) + ".png"}, {"layout", nullptr}};
    const std::string origin = c.id + "/" + std::to_string(i);
    for (const auto& l : p.state().layouts) {
      if (l.origin == origin) {
        e["layout"] = layout_summary(p, l);
        break;
      }
    }
    cands.push_back(e);
  }
  return {{"id", c.id}, {"preferred", c.preferred ? json(*c.preferred) : json(nullptr)}, {"candidates", cands}};
}

json project_summary(const ProjectState& s) {
  return {{"name", s.name},
          {"revision", s.revision},
          {"rasterized", s.condition_png.has_value()},
          {"candidate_sets", s.candidate_sets.size()},
          {"layouts", s.layouts.size()}};
}

json scores_json(const ScoreSummary& s) {
  return {{"layout", s.layout}, {"by_critic", s.by_critic}, {"mean", s.mean ? json(*s.mean) : json(nullptr)}};
}

}  // namespace

struct ApiServer::Impl {
  ServeConfig config;
  httplib::Server server;
  int bound_port = 0;
  std::thread listener;

  struct Job {
    std::string status = "running";  // running | done | failed
    json result;
    json error;
  };
  std::mutex jobs_mu;
  std::map<std::string, Job> jobs;
  std::vector<std::thread> workers;
  std::atomic<int> next_job{1};

  Project project(const httplib::Request& req) { return Project::open(config.root, req.path_params.at("p")); }

  std::string start_job(const std::string& name, json params) {
    const std::string id = "J" + std::to_string(next_job++);
    std::lock_guard lk(jobs_mu);
    jobs[id] = Job{};
    workers.emplace_back([this, id, name, params = std::move(params)] {
      Job done;
      try {
        Project p = Project::open(config.root, name);
        done.result = p.run_step(StepKind::Generate, params);
        done.status = "done";
      } catch (const Error& e) {
        done.status = "failed";
        done.error = {{"code", to_string(e.code())}, {"message", e.what()}};
      } catch (const std::exception& e) {
        done.status = "failed";
        done.error = {{"code", "Internal"}, {"message", e.what()}};
      }
      std::lock_guard lk(jobs_mu);
      jobs[id] = done;
    });
    return id;
  }

  void routes();
};

void ApiServer::Impl::routes() {
  auto& s = server;
  // SO_REUSEADDR only: a second server on a busy port must fail to bind.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  // Handlers throw wallforge::Error; the exception handler turns it into a JSON error body.
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 422, "InvalidArgument", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  });
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send_error(res, res.status, res.status == 404 ? "NotFound" : "HttpError", "no such route");
    }
  });

  const std::string P = "/api/v1/projects";

  s.Get(P, [this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& name : Project::list(config.root)) out.push_back(project_summary(Project::open(config.root, name).state()));
    send(res, 200, out);
  });

  s.Post(P, [this](const httplib::Request& req, httplib::Response& res) {
    const json b = body_of(req);
    const Project p = Project::create(config.root, field<std::string>(b, "name"), field<std::string>(b, "dxf"),
                                      field<std::string>(b, "layers"));
    send(res, 201, project_summary(p.state()));
  });

  s.Get(P + "/:p", [this](const httplib::Request& req, httplib::Response& res) { send(res, 200, project(req).state()); });

  s.Get(P + "/:p/plan", [this](const httplib::Request& req, httplib::Response& res) { send(res, 200, project(req).plan()); });

  s.Post(P + "/:p/steps", [this](const httplib::Request& req, httplib::Response& res) {
    const json b = body_of(req);
    const StepKind kind = step_kind_from_string(field<std::string>(b, "kind"));
    const json params = b.value("params", json::object());
    Project p = project(req);
    if (kind == StepKind::Generate) {
      send(res, 202, {{"job", start_job(p.state().name, params)}, {"status", "running"}});
      return;
    }
    send(res, 200, p.run_step(kind, params));
  });

  s.Post(P + "/:p/generate", [this](const httplib::Request& req, httplib::Response& res) {
    const json params = body_of(req);
    const Project p = project(req);
    send(res, 202, {{"job", start_job(p.state().name, params)}, {"status", "running"}});
  });

  s.Get(P + "/:p/jobs/:job", [this](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lk(jobs_mu);
    auto it = jobs.find(req.path_params.at("job"));
    if (it == jobs.end()) fail(ErrorCode::NotFound, "no job '" + req.path_params.at("job") + "'");
    json j{{"job", it->first}, {"status", it->second.status}};
    if (it->second.status == "done") j["result"] = it->second.result;
    if (it->second.status == "failed") j["error"] = it->second.error;
    send(res, 200, j);
  });

  s.Get(P + "/:p/candidates", [this](const httplib::Request& req, httplib::Response& res) {
    const Project p = project(req);
    json out = json::array();
    for (const auto& c : p.state().candidate_sets) out.push_back(set_summary(p, c));
    send(res, 200, out);
  });

  s.Get(P + "/:p/candidates/:set", [this](const httplib::Request& req, httplib::Response& res) {
    const Project p = project(req);
    const auto* c = p.state().find_set(req.path_params.at("set"));
    if (!c) fail(ErrorCode::NotFound, "no candidate set '" + req.path_params.at("set") + "'");
    send(res, 200, set_summary(p, *c));
  });

  s.Get(R"(/api/v1/projects/([^/]+)/candidates/([^/]+)/(\d+)\.png)",
        [this](const httplib::Request& req, httplib::Response& res) {
          const Project p = Project::open(config.root, req.matches[1]);
          const auto* c = p.state().find_set(req.matches[2]);
          const std::size_t i = std::stoul(req.matches[3]);
          if (!c || i >= c->images.size()) fail(ErrorCode::NotFound, "no such candidate image");
          res.set_content(p.read(c->images[i]), "image/png");
        });

  s.Post(P + "/:p/candidates/:set/preferred", [this](const httplib::Request& req, httplib::Response& res) {
    const json b = body_of(req);
    Project p = project(req);
    p.set_preferred(req.path_params.at("set"), field<int>(b, "index"));
    send(res, 200, set_summary(p, *p.state().find_set(req.path_params.at("set"))));
  });

  s.Get(P + "/:p/layouts", [this](const httplib::Request& req, httplib::Response& res) {
    const Project p = project(req);
    json out = json::array();
    for (const auto& l : p.state().layouts) out.push_back(layout_summary(p, l));
    send(res, 200, out);
  });

  s.Post(P + "/:p/layouts", [this](const httplib::Request& req, httplib::Response& res) {
    const json b = body_of(req);
    Project p = project(req);
    const std::string png = util::base64_decode(field<std::string>(b, "png"));
    std::optional<std::string> parent;
    if (b.contains("parent") && !b["parent"].is_null()) parent = field<std::string>(b, "parent");
    const std::string id = p.import_redblock(png, parent);
    send(res, 201, {{"layout", id}, {"report", p.report(id)}});
  });

  s.Get(P + "/:p/layouts/:id", [this](const httplib::Request& req, httplib::Response& res) {
    const Project p = project(req);
    const std::string id = req.path_params.at("id");
    const auto* rec = p.state().find_layout(id);
    if (!rec) fail(ErrorCode::UnknownLayout, "no layout '" + id + "'");
    json j = layout_summary(p, *rec);
    j["graph"] = p.layout(id);
    send(res, 200, j);
  });

  s.Post(P + "/:p/layouts/:id/edits", [this](const httplib::Request& req, httplib::Response& res) {
    const Edit e = edit_from_json(body_of(req));
    Project p = project(req);
    const EditResult r = p.apply_edit(req.path_params.at("id"), e);
    send(res, 201, {{"layout", r.layout_id}, {"parent", req.path_params.at("id")}, {"report", r.report}});
  });

  s.Get(P + "/:p/layouts/:id/metrics", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, project(req).report(req.path_params.at("id")));
  });

  s.Post(P + "/:p/layouts/:id/score", [this](const httplib::Request& req, httplib::Response& res) {
    const json b = body_of(req);
    const auto critic = field<std::string>(b, "critic");
    if (!b.contains("score") || !b["score"].is_number()) fail(ErrorCode::InvalidArgument, "score must be a number");
    Project p = project(req);
    send(res, 200, scores_json(p.record_score(req.path_params.at("id"), critic, b["score"].get<double>())));
  });

  s.Get(P + "/:p/layouts/:id/export", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
    const std::string bytes = project(req).export_layout(req.path_params.at("id"), format);
    if (format == "png") {
      send(res, 200, {{"format", format}, {"encoding", "base64"}, {"content", util::base64_encode(bytes)}});
    } else {
      send(res, 200, {{"format", format}, {"encoding", "utf-8"}, {"content", bytes}});
    }
  });

  s.Get(P + "/:p/scores", [this](const httplib::Request& req, httplib::Response& res) {
    const Project p = project(req);
    json out = json::array();
    for (const auto& l : p.state().layouts) {
      const ScoreSummary sc = p.scores(l.id);
      if (!sc.by_critic.empty()) out.push_back(scores_json(sc));
    }
    send(res, 200, out);
  });
}

ApiServer::ApiServer(ServeConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->routes();
}

ApiServer::~ApiServer() { stop(); }

namespace {

int bind(httplib::Server& s, const ServeConfig& c) {
  if (!fs::is_directory(c.root)) fail(ErrorCode::BindFailure, "project root is not a directory: " + c.root.string());
  const int port = c.port == 0 ? s.bind_to_any_port(c.host) : (s.bind_to_port(c.host, c.port) ? c.port : -1);
  if (port <= 0) fail(ErrorCode::BindFailure, "cannot bind " + c.host + ":" + std::to_string(c.port));
  return port;
}

}  // namespace

void ApiServer::start() {
  impl_->bound_port = bind(impl_->server, impl_->config);
  impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ApiServer::run() {
  impl_->bound_port = bind(impl_->server, impl_->config);
  impl_->server.listen_after_bind();
}

void ApiServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->listener.joinable()) impl_->listener.join();
  for (auto& w : impl_->workers)
    if (w.joinable()) w.join();
  impl_->workers.clear();
}

int ApiServer::port() const { return impl_->bound_port; }

}  // namespace wallforge::studio
