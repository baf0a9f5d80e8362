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

#include "wallforge/dataset.hpp"

#include <cctype>
#include <cstdio>
#include <future>
#include <sstream>

#include "wallforge/error.hpp"
#include "wallforge/util.hpp"

namespace wallforge::dataset {

namespace fs = std::filesystem;

namespace {

std::string slug(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "layout" : out;
}

std::string pair_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "plan_%04zu", i);
  return buf;
}

struct EncodedPair {
  std::string target_png;
  std::string condition_png;
};

std::string toml_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

TrainingPair build_training_pair(const plan::FloorPlan& plan, const std::string& caption, int canvas,
                                 geometry::Length scale) {
  if (plan.shear_walls.empty()) {
    fail(ErrorCode::NoShearWalls, "a training pair needs a plan with shear walls");
  }
  return TrainingPair{raster::rasterize_plan(plan, false, canvas, scale),
                      raster::rasterize_plan(plan, true, canvas, scale), caption};
}

DatasetManifest build_dataset(const std::vector<plan::FloorPlan>& plans, const std::string& caption,
                              const fs::path& out_dir, int canvas, geometry::Length scale) {
  if (plans.empty()) fail(ErrorCode::InvalidArgument, "build_dataset needs at least one plan");

  // Rasterize + encode concurrently; files are written by this thread only.
  std::vector<std::future<EncodedPair>> jobs;
  jobs.reserve(plans.size());
  for (const auto& p : plans) {
    jobs.push_back(std::async(std::launch::async, [&p, &caption, canvas, scale] {
      const TrainingPair pair = build_training_pair(p, caption, canvas, scale);
      return EncodedPair{raster::encode_png(pair.target), raster::encode_png(pair.condition)};
    }));
  }
  std::vector<EncodedPair> encoded;
  encoded.reserve(jobs.size());
  for (auto& j : jobs) encoded.push_back(j.get());

  DatasetManifest m;
  m.root = out_dir;
  m.caption = caption;
  m.canvas = canvas;
  m.scale = scale;
  m.image_dir = "img/1_" + slug(caption);

  std::error_code ec;
  fs::create_directories(out_dir / m.image_dir, ec);
  if (!ec) fs::create_directories(out_dir / "conditioning", ec);
  if (ec) fail(ErrorCode::IoFailure, "cannot create dataset directories: " + ec.message());

  for (std::size_t i = 0; i < encoded.size(); ++i) {
    ManifestEntry e;
    e.name = pair_name(i);
    e.target_png = m.image_dir + "/" + e.name + ".png";
    e.caption_txt = m.image_dir + "/" + e.name + ".txt";
    e.condition_png = "conditioning/" + e.name + ".png";
    util::write_file(out_dir / e.target_png, encoded[i].target_png);
    util::write_file(out_dir / e.caption_txt, caption);
    util::write_file(out_dir / e.condition_png, encoded[i].condition_png);
    e.target_sha256 = util::sha256_hex(encoded[i].target_png);
    e.caption_sha256 = util::sha256_hex(caption);
    e.condition_sha256 = util::sha256_hex(encoded[i].condition_png);
    m.entries.push_back(std::move(e));
  }

  if (static_cast<int>(m.entries.size()) < kRecommendedMinPairs) {
    m.warnings.push_back("dataset has " + std::to_string(m.entries.size()) +
                         " pairs; 40-50 curated layouts are recommended for LoRA fine-tuning");
  }

  nlohmann::json j = m;
  util::write_file(out_dir / "manifest.json", j.dump(2) + "\n");
  return m;
}

DatasetManifest load_manifest(const fs::path& manifest_json) {
  DatasetManifest m = nlohmann::json::parse(util::read_file(manifest_json)).get<DatasetManifest>();
  m.root = manifest_json.parent_path();
  return m;
}

TrainerConfig make_trainer_config(const DatasetManifest& manifest, const TrainerOverrides& overrides) {
  TrainerConfig c;
  c.image_size = manifest.canvas;
  c.label = manifest.caption;
  c.output_name = slug(manifest.caption);
  if (overrides.epochs) c.epochs = *overrides.epochs;
  if (overrides.steps_per_epoch) c.steps_per_epoch = *overrides.steps_per_epoch;
  if (overrides.image_size) c.image_size = *overrides.image_size;
  if (overrides.label) c.label = *overrides.label;
  if (overrides.output_name) c.output_name = *overrides.output_name;
  if (c.epochs < 1) fail(ErrorCode::InvalidOverride, "epochs must be >= 1");
  if (c.steps_per_epoch < 1) fail(ErrorCode::InvalidOverride, "steps_per_epoch must be >= 1");
  if (c.image_size < 1) fail(ErrorCode::InvalidOverride, "image_size must be >= 1");
  return c;
}

std::string render_trainer_config(const TrainerConfig& c, const DatasetManifest& manifest) {
  std::ostringstream out;
  out << "# wallforge LoRA trainer config\n";
  out << "epochs = " << c.epochs << "\n";
  out << "steps_per_epoch = " << c.steps_per_epoch << "\n";
  out << "image_size = " << c.image_size << "\n";
  out << "label = " << toml_string(c.label) << "\n";
  out << "output_name = " << toml_string(c.output_name) << "\n";
  out << "# derived sd-scripts keys\n";
  out << "train_data_dir = " << toml_string((manifest.root / "img").generic_string()) << "\n";
  out << "resolution = " << toml_string(std::to_string(c.image_size) + "," + std::to_string(c.image_size)) << "\n";
  out << "max_train_epochs = " << c.epochs << "\n";
  out << "max_train_steps = " << static_cast<long long>(c.epochs) * c.steps_per_epoch << "\n";
  out << "save_every_n_epochs = 1\n";
  out << "caption_extension = \".txt\"\n";
  out << "network_module = \"networks.lora\"\n";
  return out.str();
}

TrainerConfig parse_trainer_config(std::string_view text) {
  TrainerConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  auto unquote = [](std::string v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
      std::string out;
      for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] == '\\' && i + 2 < v.size()) ++i;
        out += v[i];
      }
      return out;
    }
    return v;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "epochs") c.epochs = std::stoi(value);
    else if (key == "steps_per_epoch") c.steps_per_epoch = std::stoi(value);
    else if (key == "image_size") c.image_size = std::stoi(value);
    else if (key == "label") c.label = unquote(value);
    else if (key == "output_name") c.output_name = unquote(value);
  }
  return c;
}

TrainerConfig emit_trainer_config(const DatasetManifest& manifest, const TrainerOverrides& overrides) {
  const TrainerConfig c = make_trainer_config(manifest, overrides);
  util::write_file(manifest.root / "trainer_config.toml", render_trainer_config(c, manifest));
  return c;
}

void to_json(nlohmann::json& j, const DatasetManifest& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"name", e.name},
                       {"target", {{"path", e.target_png}, {"sha256", e.target_sha256}}},
                       {"caption", {{"path", e.caption_txt}, {"sha256", e.caption_sha256}}},
                       {"condition", {{"path", e.condition_png}, {"sha256", e.condition_sha256}}}});
  }
  j = nlohmann::json{{"caption", m.caption},     {"image_dir", m.image_dir},
                     {"canvas", m.canvas},       {"scale_mm_per_px", m.scale},
                     {"count", m.entries.size()}, {"entries", entries},
                     {"warnings", m.warnings}};
}

void from_json(const nlohmann::json& j, DatasetManifest& m) {
  m.caption = j.at("caption").get<std::string>();
  m.image_dir = j.at("image_dir").get<std::string>();
  m.canvas = j.at("canvas").get<int>();
  m.scale = j.at("scale_mm_per_px").get<geometry::Length>();
  m.warnings = j.at("warnings").get<std::vector<std::string>>();
  m.entries.clear();
  for (const auto& e : j.at("entries")) {
    m.entries.push_back({e.at("name").get<std::string>(),
                         e.at("target").at("path").get<std::string>(),
                         e.at("caption").at("path").get<std::string>(),
                         e.at("condition").at("path").get<std::string>(),
                         e.at("target").at("sha256").get<std::string>(),
                         e.at("caption").at("sha256").get<std::string>(),
                         e.at("condition").at("sha256").get<std::string>()});
  }
}

}  // namespace wallforge::dataset
