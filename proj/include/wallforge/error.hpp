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

#include <stdexcept>
#include <string>
#include <string_view>

namespace wallforge {

// Values are part of the C ABI (see wallforge.h); append only.
enum class ErrorCode : int {
  InvalidArgument = 1,
  IoFailure = 2,
  MalformedDxf = 3,
  UnsupportedVersion = 4,
  InvalidLayerMap = 5,
  NoOutline = 6,
  NonOrthogonalWall = 7,
  PlanTooLarge = 8,
  NoShearWalls = 9,
  InvalidOverride = 10,
  Unreachable = 11,
  MalformedResponse = 12,
  ApiError = 13,
  DecodeFailure = 14,
  GridTooLarge = 15,
  DegenerateComponent = 16,
  InsufficientLateralSystem = 17,
  EigenFailure = 18,
  NonPositiveDefinite = 19,
  UnsupportedFormat = 20,
  DimensionMismatch = 21,
  DuplicateName = 22,
  DependencyMissing = 23,
  OutOfRange = 24,
  UnknownLayout = 25,
  InvalidGeometry = 26,
  BindFailure = 27,
  NotFound = 28,
  InjectedFault = 29,
};

std::string_view to_string(ErrorCode code);

/// Every domain failure in the library is reported as an Error carrying a
/// stable code; the C API maps the code one-to-one onto wf_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace wallforge
