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

#include <string>
#include <string_view>

#include "wallforge/layout.hpp"
#include "wallforge/metrics.hpp"
#include "wallforge/plan.hpp"
#include "wallforge/raster.hpp"
#include "wallforge/vectorize.hpp"

namespace wallforge::exporter {

/// Red-block image: the plan's arch walls in gray, every shear rect of the
/// graph in pure red, openings left out. Canvas placement matches
/// rasterize_plan for the same canvas size and the graph's scale.
raster::SemanticRaster redblock_raster(const plan::FloorPlan& plan, const layout::LayoutGraph& graph,
                                       int canvas = raster::kDefaultCanvas);
std::string export_redblock(const plan::FloorPlan& plan, const layout::LayoutGraph& graph,
                            int canvas = raster::kDefaultCanvas);

/// Decodes an (possibly re-saved) red-block PNG and vectorizes its red
/// pixels. DimensionMismatch when the image is not the plan's canvas.
layout::LayoutGraph import_redblock(std::string_view png, const plan::FloorPlan& reference,
                                    int canvas = raster::kDefaultCanvas,
                                    raster::Length scale = raster::kDefaultScale,
                                    const vectorize::VectorizeOptions& options = {});

enum class SolverFormat { S2K, ModelJson };
std::string_view to_string(SolverFormat f);
/// "s2k" / "json" (case-insensitive); anything else is UnsupportedFormat.
SolverFormat solver_format_from_string(std::string_view name);

std::string export_solver_model(const metrics::StructuralModel& model, SolverFormat format);

/// ModelJson schema "wallforge.model" v1; doubles round-trip exactly.
nlohmann::json model_to_json(const metrics::StructuralModel& model);
metrics::StructuralModel model_from_json(const nlohmann::json& j);
metrics::StructuralModel import_model_json(std::string_view text);

}  // namespace wallforge::exporter
