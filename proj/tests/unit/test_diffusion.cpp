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

#include <fstream>

#include "doctest.h"
#include "mock_sd.hpp"
#include "wallforge/diffusion.hpp"
#include "wallforge/error.hpp"
#include "wallforge/util.hpp"

using namespace wallforge;
using namespace wallforge::diffusion;
using raster::PaletteClass;

namespace {

nlohmann::json transcript() {
  return nlohmann::json::parse(util::read_file(std::string(WF_FIXTURES) + "/sd/transcript.json"));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{0};
}

ApiEndpoint endpoint(const mock::TranscriptServer& s, int parallel = 1) {
  return ApiEndpoint{s.url(), std::chrono::milliseconds(5000), parallel};
}

GenerationRequest seed42() {
  GenerationRequest r = mock::canonical_request();
  r.seed = 42;
  r.batch = 1;
  return r;
}

}  // namespace

TEST_CASE("img2img request body matches the golden file") {
  const nlohmann::json body = build_img2img_body(mock::canonical_request());
  CHECK(body.dump(2) + "\n" == util::read_file(std::string(WF_FIXTURES) + "/sd/img2img_request.json"));

  CHECK(body.at("prompt") == "Shear Wall Layout <lora:shearwall_l17:0.8>");
  CHECK(body.at("batch_size") == 4);
  CHECK(body.at("seed") == 1234);
  const auto& unit = body.at("alwayson_scripts").at("controlnet").at("args").at(0);
  CHECK(unit.at("image") == body.at("init_images").at(0));
  CHECK(unit.at("weight") == 1.0);
  const auto png = util::base64_decode(unit.at("image").get<std::string>());
  CHECK(raster::from_rgb_exact(raster::decode_png(png), mock::sd_condition().frame) == mock::sd_condition());

  GenerationRequest random = mock::canonical_request();
  random.seed.reset();
  CHECK(build_img2img_body(random).at("seed") == -1);
}

TEST_CASE("request validation") {
  auto with = [](auto&& edit) {
    GenerationRequest r = mock::canonical_request();
    edit(r);
    return code_of([&] { r.validate(); });
  };
  CHECK(with([](GenerationRequest&) {}) == ErrorCode{0});
  CHECK(with([](GenerationRequest& r) { r.batch = 0; }) == ErrorCode::InvalidArgument);
  CHECK(with([](GenerationRequest& r) { r.batch = 17; }) == ErrorCode::InvalidArgument);
  CHECK(with([](GenerationRequest& r) { r.steps = 151; }) == ErrorCode::InvalidArgument);
  CHECK(with([](GenerationRequest& r) { r.prompt.clear(); }) == ErrorCode::InvalidArgument);
  CHECK(with([](GenerationRequest& r) { r.lora_weight = 1.6; }) == ErrorCode::InvalidArgument);
  CHECK(with([](GenerationRequest& r) { r.control_weight = 2.5; }) == ErrorCode::InvalidArgument);
  CHECK(with([](GenerationRequest& r) { r.condition_image = {}; }) == ErrorCode::InvalidArgument);
}

TEST_CASE("health_check") {
  mock::TranscriptServer server(transcript());
  const ServerInfo info = health_check(endpoint(server));
  CHECK(info.samplers == std::vector<std::string>{"Euler a", "DPM++ 2M Karras"});
  CHECK(info.loras == std::vector<std::string>{"shearwall_l17"});

  CHECK(code_of([] { health_check({"http://127.0.0.1:1", std::chrono::milliseconds(2000), 1}); }) ==
        ErrorCode::Unreachable);

  mock::TranscriptServer html(nlohmann::json::array(
      {{{"method", "GET"}, {"path", "/sdapi/v1/samplers"}, {"request", nullptr}, {"status", 200},
        {"response", "<html><body>502 Bad Gateway</body></html>"}}}));
  CHECK(code_of([&] { health_check(endpoint(html)); }) == ErrorCode::MalformedResponse);

  mock::TranscriptServer odd(nlohmann::json::array(
      {{{"method", "GET"}, {"path", "/sdapi/v1/samplers"}, {"request", nullptr}, {"status", 200},
        {"response", {{"samplers", 2}}}}}));
  CHECK(code_of([&] { health_check(endpoint(odd)); }) == ErrorCode::MalformedResponse);
}

TEST_CASE("generate_candidates against the recorded transcript") {
  mock::TranscriptServer server(transcript());
  const GenerationRequest req = mock::canonical_request();
  const CandidateSet set = generate_candidates(endpoint(server), req, health_check(endpoint(server)));
  REQUIRE(set.candidates.size() == 4);
  const raster::SemanticRaster cond = mock::sd_condition();
  for (int i = 0; i < 4; ++i) {
    const Candidate& c = set.candidates[i];
    CHECK(c.id == i);
    CHECK(c.seed == 1234 + i);
    CHECK(c.raster.frame == cond.frame);
    CHECK(c.raster.count(PaletteClass::ShearWall) > 0);
    // The jittered model output quantizes back onto the plan plus red walls.
    for (std::size_t p = 0; p < cond.pixels.size(); ++p) {
      if (c.raster.pixels[p] != cond.pixels[p]) CHECK(c.raster.pixels[p] == PaletteClass::ShearWall);
    }
  }
  CHECK(set.request_echo == req);
  CHECK_FALSE(set.created_at.empty());
  CHECK(server.unmatched() == 0);

  const nlohmann::json j = set;
  CHECK(j.get<CandidateSet>() == set);
}

TEST_CASE("fixed-seed replay is byte-identical") {
  mock::TranscriptServer server(transcript());
  const CandidateSet a = generate_candidates(endpoint(server), seed42());
  const CandidateSet b = generate_candidates(endpoint(server), seed42());
  REQUIRE(a.candidates.size() == 1);
  CHECK(a == b);
  CHECK(raster::encode_png(a.candidates[0].raster) == raster::encode_png(b.candidates[0].raster));
  CHECK(nlohmann::json(a).at("candidates").dump() == nlohmann::json(b).at("candidates").dump());
}

TEST_CASE("random seeds are echoed from the server") {
  mock::TranscriptServer server(transcript());
  GenerationRequest r = mock::canonical_request();
  r.seed.reset();
  r.batch = 2;
  const CandidateSet set = generate_candidates(endpoint(server), r);
  REQUIRE(set.candidates.size() == 2);
  CHECK(set.candidates[0].seed == 3141592);
  CHECK(set.candidates[1].seed == 3141593);
}

TEST_CASE("generate_candidates errors") {
  mock::TranscriptServer server(transcript());
  GenerationRequest boom = seed42();
  boom.steps = 99;
  try {
    generate_candidates(endpoint(server), boom);
    FAIL("expected ApiError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ApiError);
    CHECK(std::string(e.what()).find("500") != std::string::npos);
    CHECK(std::string(e.what()).find("CUDA") != std::string::npos);
  }
  GenerationRequest other = seed42();
  other.sampler = "LMS";
  CHECK(code_of([&] { generate_candidates(endpoint(server), other, health_check(endpoint(server))); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { generate_candidates({"http://127.0.0.1:1", std::chrono::milliseconds(2000), 1}, seed42()); }) ==
        ErrorCode::Unreachable);

  const std::string bad_png = util::base64_encode("not a png");
  mock::TranscriptServer garbage(nlohmann::json::array(
      {{{"method", "POST"}, {"path", "/sdapi/v1/img2img"}, {"request", nullptr}, {"status", 200},
        {"response", {{"images", {bad_png}}, {"info", "{}"}}}}}));
  CHECK(code_of([&] { generate_candidates(endpoint(garbage), seed42()); }) == ErrorCode::DecodeFailure);

  mock::TranscriptServer short_batch(nlohmann::json::array(
      {{{"method", "POST"}, {"path", "/sdapi/v1/img2img"}, {"request", nullptr}, {"status", 200},
        {"response", {{"images", nlohmann::json::array()}}}}}));
  CHECK(code_of([&] { generate_candidates(endpoint(short_batch), seed42()); }) == ErrorCode::MalformedResponse);
}

TEST_CASE("expand_grid ordering and limits") {
  CHECK(expand_grid({}).size() == 1);
  const auto pts = expand_grid({{"steps", {20, 30}}, {"cfg_scale", {5.0, 7.0, 9.0}}});
  REQUIRE(pts.size() == 6);
  // cfg_scale sorts first, so it varies slowest.
  CHECK(pts[0].at("cfg_scale") == 5.0);
  CHECK(pts[0].at("steps") == 20);
  CHECK(pts[1].at("steps") == 30);
  CHECK(pts[2].at("cfg_scale") == 7.0);
  std::vector<nlohmann::json> ten;
  for (int i = 1; i <= 10; ++i) ten.push_back(i);
  CHECK(code_of([&] { expand_grid({{"steps", ten}, {"cfg_scale", ten}}); }) == ErrorCode::GridTooLarge);
  CHECK(code_of([] { expand_grid({{"seed", {1, 2}}}); }) == ErrorCode::InvalidArgument);
  CHECK(apply_point(seed42(), {{"lora_name", "x"}, {"lora_weight", 0.3}}).lora_name == "x");
}

TEST_CASE("sweep_parameters") {
  mock::TranscriptServer server(transcript());
  const auto two = sweep_parameters(endpoint(server, 2), seed42(), {{"control_weight", {0.5, 1.0}}});
  REQUIRE(two.size() == 2);
  REQUIRE(two[0].result.has_value());
  REQUIRE(two[1].result.has_value());
  CHECK(two[0].result->request_echo.control_weight == 0.5);
  CHECK(two[1].result->request_echo.control_weight == 1.0);
  CHECK(two[1].result == generate_candidates(endpoint(server), seed42()));

  const auto base = sweep_parameters(endpoint(server), seed42(), {});
  REQUIRE(base.size() == 1);
  CHECK(base[0].result == generate_candidates(endpoint(server), seed42()));

  // Unrecorded points fail individually; in-flight calls stay within the bound.
  mock::TranscriptServer bounded(transcript());
  const auto mixed =
      sweep_parameters(endpoint(bounded, 3), seed42(), {{"steps", {10, 20, 30, 40, 50, 60, 70, 80}}});
  REQUIRE(mixed.size() == 8);
  int ok = 0;
  for (const auto& p : mixed) {
    if (p.result) {
      ++ok;
      CHECK(p.values.at("steps") == 30);
    } else {
      CHECK(p.error == ErrorCode::ApiError);
    }
  }
  CHECK(ok == 1);
  CHECK(bounded.max_in_flight() <= 3);
  CHECK(bounded.max_in_flight() >= 2);
}
