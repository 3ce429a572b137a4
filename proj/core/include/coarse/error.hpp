// Copyright 2026 The coarse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace coarse {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: shapes, dimensions, invariants of a domain type.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A reduction was requested for a coarse-graining that fails its
/// compatibility check and the caller did not pass `force`.
class IncompatibleReduction : public InvalidInput {
 public:
  IncompatibleReduction(const std::string& what, double residual)
      : InvalidInput(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The numerics could not deliver the requested result within tolerance
/// (group closure cap, degenerate sampling in block decomposition, ...).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace coarse
