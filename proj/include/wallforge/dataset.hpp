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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wallforge/plan.hpp"
#include "wallforge/raster.hpp"

namespace wallforge::dataset {

struct TrainingPair {
  raster::SemanticRaster condition;  // architecture only
  raster::SemanticRaster target;     // architecture + shear walls
  std::string caption;
};

TrainingPair build_training_pair(const plan::FloorPlan& plan, const std::string& caption,
                                 int canvas = raster::kDefaultCanvas,
                                 geometry::Length scale = raster::kDefaultScale);

/// Curated-set size below which build_dataset warns.
inline constexpr int kRecommendedMinPairs = 40;

struct ManifestEntry {
  std::string name;            // basename shared by image, caption and condition
  std::string target_png;      // paths relative to the dataset root
  std::string caption_txt;
  std::string condition_png;
  std::string target_sha256;
  std::string caption_sha256;
  std::string condition_sha256;
};

struct DatasetManifest {
  std::filesystem::path root;
  std::string caption;
  std::string image_dir;  // relative, e.g. "img/1_shear_wall_layout"
  int canvas = raster::kDefaultCanvas;
  geometry::Length scale = raster::kDefaultScale;
  std::vector<ManifestEntry> entries;
  std::vector<std::string> warnings;
};

/// Layout under `out_dir`:
///   img/1_<slug>/<name>.png + <name>.txt   target images and captions
///   conditioning/<name>.png                architecture-only images
///   manifest.json
DatasetManifest build_dataset(const std::vector<plan::FloorPlan>& plans, const std::string& caption,
                              const std::filesystem::path& out_dir,
                              int canvas = raster::kDefaultCanvas,
                              geometry::Length scale = raster::kDefaultScale);

DatasetManifest load_manifest(const std::filesystem::path& manifest_json);

struct TrainerConfig {
  int epochs = 20;
  int steps_per_epoch = 100;
  int image_size = raster::kDefaultCanvas;
  std::string label;
  std::string output_name;
  bool operator==(const TrainerConfig&) const = default;
};

struct TrainerOverrides {
  std::optional<int> epochs;
  std::optional<int> steps_per_epoch;
  std::optional<int> image_size;
  std::optional<std::string> label;
  std::optional<std::string> output_name;
};

TrainerConfig make_trainer_config(const DatasetManifest& manifest, const TrainerOverrides& overrides);

/// Flat TOML (`key = value`) accepted by the sd-scripts `--config_file`
/// option; wallforge keys come first, derived trainer keys after.
std::string render_trainer_config(const TrainerConfig& config, const DatasetManifest& manifest);
TrainerConfig parse_trainer_config(std::string_view text);

/// Writes `<manifest.root>/trainer_config.toml` and returns the config.
TrainerConfig emit_trainer_config(const DatasetManifest& manifest, const TrainerOverrides& overrides);

void to_json(nlohmann::json& j, const DatasetManifest& m);
void from_json(const nlohmann::json& j, DatasetManifest& m);

}  // namespace wallforge::dataset
