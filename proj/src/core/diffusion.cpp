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

#include "wallforge/diffusion.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <thread>

#include "httplib.h"

#include "wallforge/util.hpp"
#include "wallforge/vectorize.hpp"

namespace wallforge::diffusion {

void GenerationRequest::validate() const {
  auto bad = [](const std::string& m) { fail(ErrorCode::InvalidArgument, m); };
  if (prompt.empty()) bad("prompt must not be empty");
  if (batch < 1 || batch > 16) bad("batch must be in [1, 16]");
  if (steps < 1 || steps > 150) bad("steps must be in [1, 150]");
  if (!(lora_weight >= 0 && lora_weight <= 1.5)) bad("lora_weight must be in [0, 1.5]");
  if (!(control_weight >= 0 && control_weight <= 2)) bad("control_weight must be in [0, 2]");
  if (!(cfg_scale > 0)) bad("cfg_scale must be positive");
  if (!(denoising_strength >= 0 && denoising_strength <= 1)) bad("denoising_strength must be in [0, 1]");
  if (condition_image.pixels.empty()) bad("condition image is empty");
}

namespace {

std::string png_b64(const raster::SemanticRaster& r) { return util::base64_encode(raster::encode_png(r)); }

std::string excerpt(const std::string& body) {
  return body.size() <= 200 ? body : body.substr(0, 200) + "...";
}

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

httplib::Client make_client(const ApiEndpoint& ep) {
  std::string url = ep.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  httplib::Client cli(url);
  if (!cli.is_valid()) fail(ErrorCode::InvalidArgument, "bad API URL '" + ep.base_url + "'");
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(ep.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(ep.timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  return cli;
}

[[noreturn]] void unreachable(const ApiEndpoint& ep, httplib::Error e) {
  fail(ErrorCode::Unreachable, ep.base_url + ": " + httplib::to_string(e));
}

nlohmann::json parse_body(const std::string& body, const std::string& what) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::MalformedResponse, what + " is not JSON: " + excerpt(body));
  }
}

std::vector<std::string> names_of(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorCode::MalformedResponse, what + " is not a list");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_object() && e.contains("name") && e["name"].is_string()) {
      out.push_back(e["name"].get<std::string>());
    } else {
      fail(ErrorCode::MalformedResponse, what + " entry has no name");
    }
  }
  return out;
}

std::string fmt_weight(double w) { return nlohmann::json(w).dump(); }

}  // namespace

nlohmann::json build_img2img_body(const GenerationRequest& req) {
  req.validate();
  const std::string image = png_b64(req.condition_image);
  std::string prompt = req.prompt;
  if (!req.lora_name.empty()) prompt += " <lora:" + req.lora_name + ":" + fmt_weight(req.lora_weight) + ">";
  nlohmann::json unit = {{"enabled", true},
                         {"image", image},
                         {"module", req.control_module},
                         {"model", req.control_model},
                         {"weight", req.control_weight},
                         {"resize_mode", "Just Resize"},
                         {"pixel_perfect", true},
                         {"control_mode", "Balanced"}};
  return nlohmann::json{{"init_images", {image}},
                        {"prompt", prompt},
                        {"negative_prompt", req.negative_prompt},
                        {"sampler_name", req.sampler},
                        {"steps", req.steps},
                        {"cfg_scale", req.cfg_scale},
                        {"seed", req.seed.value_or(-1)},
                        {"batch_size", req.batch},
                        {"n_iter", 1},
                        {"width", req.condition_image.width()},
                        {"height", req.condition_image.height()},
                        {"denoising_strength", req.denoising_strength},
                        {"send_images", true},
                        {"save_images", false},
                        {"alwayson_scripts", {{"controlnet", {{"args", {unit}}}}}}};
}

ServerInfo health_check(const ApiEndpoint& ep) {
  httplib::Client cli = make_client(ep);
  ServerInfo info;
  for (const char* path : {"/sdapi/v1/samplers", "/sdapi/v1/loras"}) {
    auto res = cli.Get(path);
    if (!res) unreachable(ep, res.error());
    if (res->status != 200) {
      fail(ErrorCode::MalformedResponse, std::string(path) + " returned " + std::to_string(res->status) + ": " +
                                             excerpt(res->body));
    }
    auto names = names_of(parse_body(res->body, path), path);
    (std::string_view(path).ends_with("samplers") ? info.samplers : info.loras) = std::move(names);
  }
  return info;
}

CandidateSet generate_candidates(const ApiEndpoint& ep, const GenerationRequest& req,
                                 const std::optional<ServerInfo>& info) {
  const nlohmann::json body = build_img2img_body(req);
  if (info && !info->samplers.empty() &&
      std::find(info->samplers.begin(), info->samplers.end(), req.sampler) == info->samplers.end()) {
    fail(ErrorCode::InvalidArgument, "sampler '" + req.sampler + "' is not offered by the server");
  }
  httplib::Client cli = make_client(ep);
  auto res = cli.Post("/sdapi/v1/img2img", body.dump(), "application/json");
  if (!res) unreachable(ep, res.error());
  if (res->status != 200) {
    fail(ErrorCode::ApiError, "img2img returned " + std::to_string(res->status) + ": " + excerpt(res->body));
  }
  const nlohmann::json j = parse_body(res->body, "img2img response");
  if (!j.is_object() || !j.contains("images") || !j["images"].is_array()) {
    fail(ErrorCode::MalformedResponse, "img2img response has no image list");
  }
  // ControlNet may append its detected map after the batch; only the batch counts.
  const auto& images = j["images"];
  if (static_cast<int>(images.size()) < req.batch) {
    fail(ErrorCode::MalformedResponse, "img2img returned " + std::to_string(images.size()) + " images for batch " +
                                           std::to_string(req.batch));
  }

  std::vector<std::int64_t> seeds;
  if (j.contains("info") && j["info"].is_string()) {
    try {
      const auto meta = nlohmann::json::parse(j["info"].get<std::string>());
      if (meta.contains("all_seeds")) seeds = meta["all_seeds"].get<std::vector<std::int64_t>>();
    } catch (const nlohmann::json::exception&) {
    }
  }
  if (static_cast<int>(seeds.size()) < req.batch) {
    if (!req.seed) fail(ErrorCode::MalformedResponse, "server did not report the seeds it drew");
    seeds.clear();
    for (int i = 0; i < req.batch; ++i) seeds.push_back(*req.seed + i);
  }

  CandidateSet set;
  set.request_echo = req;
  set.created_at = now_utc();
  for (int i = 0; i < req.batch; ++i) {
    raster::RgbImage img;
    try {
      if (!images[i].is_string()) fail(ErrorCode::DecodeFailure, "not a string");
      img = raster::decode_png(util::base64_decode(images[i].get<std::string>()));
    } catch (const Error& e) {
      fail(ErrorCode::DecodeFailure, "candidate " + std::to_string(i) + ": " + e.what());
    }
    if (img.width != req.condition_image.width() || img.height != req.condition_image.height()) {
      fail(ErrorCode::DecodeFailure, "candidate " + std::to_string(i) + " is " + std::to_string(img.width) + "x" +
                                         std::to_string(img.height) + ", condition is " +
                                         std::to_string(req.condition_image.width()) + "x" +
                                         std::to_string(req.condition_image.height()));
    }
    set.candidates.push_back({i, vectorize::classify_pixels(img, req.condition_image.frame), seeds[i]});
  }
  return set;
}

std::vector<std::map<std::string, nlohmann::json>> expand_grid(const ParameterGrid& grid) {
  static const std::vector<std::string> allowed{"sampler", "steps", "cfg_scale", "control_weight", "lora_weight",
                                                "lora_name"};
  std::size_t total = 1;
  for (const auto& [field, values] : grid) {
    if (std::find(allowed.begin(), allowed.end(), field) == allowed.end()) {
      fail(ErrorCode::InvalidArgument, "field '" + field + "' cannot be swept");
    }
    if (values.empty()) fail(ErrorCode::InvalidArgument, "field '" + field + "' has no values");
    total *= values.size();
    if (total > kMaxGridPoints) {
      fail(ErrorCode::GridTooLarge, "grid exceeds " + std::to_string(kMaxGridPoints) + " points");
    }
  }
  std::vector<std::map<std::string, nlohmann::json>> points{{}};
  for (const auto& [field, values] : grid) {
    std::vector<std::map<std::string, nlohmann::json>> next;
    for (const auto& p : points) {
      for (const auto& v : values) {
        auto q = p;
        q[field] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

GenerationRequest apply_point(const GenerationRequest& base, const std::map<std::string, nlohmann::json>& values) {
  GenerationRequest r = base;
  try {
    for (const auto& [field, v] : values) {
      if (field == "sampler") r.sampler = v.get<std::string>();
      else if (field == "steps") r.steps = v.get<int>();
      else if (field == "cfg_scale") r.cfg_scale = v.get<double>();
      else if (field == "control_weight") r.control_weight = v.get<double>();
      else if (field == "lora_weight") r.lora_weight = v.get<double>();
      else if (field == "lora_name") r.lora_name = v.get<std::string>();
      else fail(ErrorCode::InvalidArgument, "field '" + field + "' cannot be swept");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("bad grid value: ") + e.what());
  }
  return r;
}

std::vector<SweepPoint> sweep_parameters(const ApiEndpoint& ep, const GenerationRequest& base,
                                         const ParameterGrid& grid) {
  const auto points = expand_grid(grid);
  std::vector<SweepPoint> out(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepPoint& sp = out[i];
      sp.values = points[i];
      try {
        sp.result = generate_candidates(ep, apply_point(base, points[i]));
      } catch (const Error& e) {
        sp.error = e.code();
        sp.error_message = e.what();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(std::max(1, ep.max_parallel), points.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return out;
}

namespace {

nlohmann::json raster_json(const raster::SemanticRaster& r) {
  return {{"width", r.frame.width},
          {"height", r.frame.height},
          {"scale", r.frame.scale},
          {"origin", {r.frame.origin_x, r.frame.origin_y}},
          {"png", png_b64(r)}};
}

raster::SemanticRaster raster_from(const nlohmann::json& j) {
  raster::RasterFrame f;
  f.width = j.at("width").get<int>();
  f.height = j.at("height").get<int>();
  f.scale = j.at("scale").get<geometry::Length>();
  f.origin_x = j.at("origin").at(0).get<geometry::Length>();
  f.origin_y = j.at("origin").at(1).get<geometry::Length>();
  return raster::from_rgb_exact(raster::decode_png(util::base64_decode(j.at("png").get<std::string>())), f);
}

}  // namespace

void to_json(nlohmann::json& j, const GenerationRequest& r) {
  j = nlohmann::json{{"prompt", r.prompt},
                     {"negative_prompt", r.negative_prompt},
                     {"condition_image", raster_json(r.condition_image)},
                     {"lora_name", r.lora_name},
                     {"lora_weight", r.lora_weight},
                     {"sampler", r.sampler},
                     {"steps", r.steps},
                     {"cfg_scale", r.cfg_scale},
                     {"seed", r.seed ? nlohmann::json(*r.seed) : nlohmann::json("Random")},
                     {"batch", r.batch},
                     {"control_weight", r.control_weight},
                     {"denoising_strength", r.denoising_strength},
                     {"control_module", r.control_module},
                     {"control_model", r.control_model}};
}

void from_json(const nlohmann::json& j, GenerationRequest& r) {
  r = GenerationRequest{};
  r.prompt = j.at("prompt").get<std::string>();
  r.negative_prompt = j.value("negative_prompt", std::string{});
  r.condition_image = raster_from(j.at("condition_image"));
  r.lora_name = j.value("lora_name", std::string{});
  r.lora_weight = j.value("lora_weight", r.lora_weight);
  r.sampler = j.value("sampler", r.sampler);
  r.steps = j.value("steps", r.steps);
  r.cfg_scale = j.value("cfg_scale", r.cfg_scale);
  if (j.contains("seed") && j["seed"].is_number_integer()) r.seed = j["seed"].get<std::int64_t>();
  r.batch = j.value("batch", r.batch);
  r.control_weight = j.value("control_weight", r.control_weight);
  r.denoising_strength = j.value("denoising_strength", r.denoising_strength);
  r.control_module = j.value("control_module", r.control_module);
  r.control_model = j.value("control_model", r.control_model);
}

void to_json(nlohmann::json& j, const CandidateSet& s) {
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : s.candidates) cands.push_back({{"id", c.id}, {"seed", c.seed}, {"raster", raster_json(c.raster)}});
  j = nlohmann::json{{"request", s.request_echo}, {"candidates", cands}, {"created_at", s.created_at}};
}

void from_json(const nlohmann::json& j, CandidateSet& s) {
  s = CandidateSet{};
  s.request_echo = j.at("request").get<GenerationRequest>();
  for (const auto& c : j.at("candidates")) {
    s.candidates.push_back({c.at("id").get<int>(), raster_from(c.at("raster")), c.at("seed").get<std::int64_t>()});
  }
  s.created_at = j.value("created_at", std::string{});
}

}  // namespace wallforge::diffusion
