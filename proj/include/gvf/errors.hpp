/*
 * Copyright 2026 The GVF Path Following Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace gvf {

/// Base class for runtime failures of the guidance math (as opposed to bad
/// arguments, which raise std::invalid_argument).
class GuidanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The guidance field vanishes at the query point (a critical point of phi).
class DegenerateFieldError : public GuidanceError {
 public:
  using GuidanceError::GuidanceError;
};

/// Ground speed too small for the velocity direction to be defined.
class ZeroSpeedError : public GuidanceError {
 public:
  using GuidanceError::GuidanceError;
};

}  // namespace gvf
