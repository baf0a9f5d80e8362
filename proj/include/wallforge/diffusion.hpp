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

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wallforge/error.hpp"
#include "wallforge/raster.hpp"

namespace wallforge::diffusion {

struct ApiEndpoint {
  std::string base_url = "http://127.0.0.1:7860";
  std::chrono::milliseconds timeout{120000};  // per HTTP call
  int max_parallel = 1;
};

struct ServerInfo {
  std::vector<std::string> samplers;
  std::vector<std::string> loras;
};

struct GenerationRequest {
  std::string prompt = "Shear Wall Layout";
  std::string negative_prompt;
  raster::SemanticRaster condition_image;
  std::string lora_name;
  double lora_weight = 1.0;
  std::string sampler = "Euler a";
  int steps = 30;
  double cfg_scale = 7.0;
  std::optional<std::int64_t> seed;  // empty = random, resolved by the server
  int batch = 4;
  double control_weight = 1.0;
  double denoising_strength = 0.75;
  std::string control_module = "none";
  std::string control_model = "control_v11p_sd15_seg";

  /// InvalidArgument unless batch in [1,16], steps in [1,150], prompt
  /// non-empty, lora_weight in [0,1.5], control_weight in [0,2] and the
  /// condition image is non-empty.
  void validate() const;
  bool operator==(const GenerationRequest&) const = default;
};

struct Candidate {
  int id = 0;
  raster::SemanticRaster raster;
  std::int64_t seed = -1;
  bool operator==(const Candidate&) const = default;
};

struct CandidateSet {
  GenerationRequest request_echo;
  std::vector<Candidate> candidates;
  std::string created_at;  // ISO-8601 UTC, not part of equality

  bool operator==(const CandidateSet& o) const {
    return request_echo == o.request_echo && candidates == o.candidates;
  }
};

/// Body of POST /sdapi/v1/img2img. Object keys are sorted, so dump() is
/// byte-stable.
nlohmann::json build_img2img_body(const GenerationRequest& req);

/// GET /sdapi/v1/samplers and /sdapi/v1/loras.
ServerInfo health_check(const ApiEndpoint& ep);

/// One img2img call returning `req.batch` palette-quantized candidates. When
/// `info` is given the sampler must be one the server offers.
CandidateSet generate_candidates(const ApiEndpoint& ep, const GenerationRequest& req,
                                 const std::optional<ServerInfo>& info = std::nullopt);

inline constexpr std::size_t kMaxGridPoints = 64;

/// Field -> values; fields are taken in name order, the first one varying
/// slowest. Allowed fields: sampler, steps, cfg_scale, control_weight,
/// lora_weight, lora_name.
using ParameterGrid = std::map<std::string, std::vector<nlohmann::json>>;

struct SweepPoint {
  std::map<std::string, nlohmann::json> values;
  std::optional<CandidateSet> result;
  std::optional<ErrorCode> error;
  std::string error_message;
};

/// Expands the grid (GridTooLarge above 64 points), runs the points with at
/// most ep.max_parallel in flight and returns them in grid order. Per-point
/// failures are recorded, not thrown.
std::vector<std::map<std::string, nlohmann::json>> expand_grid(const ParameterGrid& grid);
GenerationRequest apply_point(const GenerationRequest& base, const std::map<std::string, nlohmann::json>& values);
std::vector<SweepPoint> sweep_parameters(const ApiEndpoint& ep, const GenerationRequest& base,
                                         const ParameterGrid& grid);

void to_json(nlohmann::json& j, const GenerationRequest& r);
void from_json(const nlohmann::json& j, GenerationRequest& r);
void to_json(nlohmann::json& j, const CandidateSet& s);
void from_json(const nlohmann::json& j, CandidateSet& s);

}  // namespace wallforge::diffusion
