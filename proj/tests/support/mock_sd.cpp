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

#include "mock_sd.hpp"

#include <chrono>

#include "httplib.h"

namespace mock {

TranscriptServer::TranscriptServer(nlohmann::json transcript)
    : transcript_(std::move(transcript)), server_(std::make_unique<httplib::Server>()) {
  auto handle = [this](const httplib::Request& req, httplib::Response& res) {
    const int now = ++in_flight_;
    int prev = max_in_flight_.load();
    while (now > prev && !max_in_flight_.compare_exchange_weak(prev, now)) {
    }
    // Hold the request briefly so overlapping calls are observable.
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    for (const auto& e : transcript_) {
      if (e.at("method") != req.method || e.at("path") != req.path) continue;
      if (!e.at("request").is_null() && e.at("request").dump() != req.body) continue;
      res.status = e.value("status", 200);
      const auto& body = e.at("response");
      if (body.is_string()) {
        res.set_content(body.get<std::string>(), e.value("content_type", std::string("text/html")));
      } else {
        res.set_content(body.dump(), "application/json");
      }
      --in_flight_;
      return;
    }
    ++unmatched_;
    res.status = 404;
    res.set_content(R"({"error": "no transcript entry"})", "application/json");
    --in_flight_;
  };
  server_->Get(".*", handle);
  server_->Post(".*", handle);
  port_ = server_->bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

TranscriptServer::~TranscriptServer() {
  server_->stop();
  thread_.join();
}

std::string TranscriptServer::url() const { return "http://127.0.0.1:" + std::to_string(port_); }

wallforge::raster::SemanticRaster sd_condition() {
  using wallforge::geometry::make_rect;
  using wallforge::raster::PaletteClass;
  wallforge::raster::RasterFrame f;
  f.width = f.height = 64;
  wallforge::raster::SemanticRaster r(f);
  for (const auto& w : {make_rect(400, 400, 6000, 600), make_rect(400, 5400, 6000, 5600), make_rect(400, 400, 600, 5600),
                        make_rect(5800, 400, 6000, 5600), make_rect(3000, 400, 3200, 5600)}) {
    wallforge::raster::paint(r, w, PaletteClass::ArchWall);
  }
  wallforge::raster::paint(r, make_rect(1200, 400, 2000, 600), PaletteClass::Opening);
  return r;
}

wallforge::diffusion::GenerationRequest canonical_request() {
  wallforge::diffusion::GenerationRequest req;
  req.prompt = "Shear Wall Layout";
  req.negative_prompt = "blurry, text";
  req.condition_image = sd_condition();
  req.lora_name = "shearwall_l17";
  req.lora_weight = 0.8;
  req.sampler = "DPM++ 2M Karras";
  req.steps = 30;
  req.cfg_scale = 7.0;
  req.seed = 1234;
  req.batch = 4;
  req.control_weight = 1.0;
  return req;
}

}  // namespace mock
