// Copyright 2026 The squidsim Authors
//
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

namespace squidsim {

/// Base class for all squidsim errors. what() carries a human-readable
/// message; type_name() a stable machine-readable identifier.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* type_name() const { return "Error"; }
};

#define SQUIDSIM_DEFINE_ERROR(NAME)                            \
  class NAME : public Error {                                  \
   public:                                                     \
    explicit NAME(const std::string& msg) : Error(msg) {}      \
    const char* type_name() const override { return #NAME; }   \
  }

// config / input validation
SQUIDSIM_DEFINE_ERROR(ParseError);
SQUIDSIM_DEFINE_ERROR(ValidationError);

// circuit-model
SQUIDSIM_DEFINE_ERROR(NoDoubleWell);

// spectrum
SQUIDSIM_DEFINE_ERROR(GridTooCoarse);
SQUIDSIM_DEFINE_ERROR(ConvergenceFailure);
SQUIDSIM_DEFINE_ERROR(NoCrossingFound);
SQUIDSIM_DEFINE_ERROR(BranchAmbiguity);

// dynamics
SQUIDSIM_DEFINE_ERROR(StepUnstable);
SQUIDSIM_DEFINE_ERROR(InvalidInitialState);

// lz-analytics
SQUIDSIM_DEFINE_ERROR(InvalidOrder);

#undef SQUIDSIM_DEFINE_ERROR

}  // namespace squidsim
