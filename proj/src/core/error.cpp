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

#include "wallforge/error.hpp"

namespace wallforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MalformedDxf: return "MalformedDxf";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::InvalidLayerMap: return "InvalidLayerMap";
    case ErrorCode::NoOutline: return "NoOutline";
    case ErrorCode::NonOrthogonalWall: return "NonOrthogonalWall";
    case ErrorCode::PlanTooLarge: return "PlanTooLarge";
    case ErrorCode::NoShearWalls: return "NoShearWalls";
    case ErrorCode::InvalidOverride: return "InvalidOverride";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::ApiError: return "ApiError";
    case ErrorCode::DecodeFailure: return "DecodeFailure";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::DegenerateComponent: return "DegenerateComponent";
    case ErrorCode::InsufficientLateralSystem: return "InsufficientLateralSystem";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::DependencyMissing: return "DependencyMissing";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnknownLayout: return "UnknownLayout";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InjectedFault: return "InjectedFault";
  }
  return "Unknown";
}

}  // namespace wallforge
