// Copyright 2026 The DQE Authors
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

namespace dqe {

/// Failure categories. The CLI maps them onto stable exit codes.
enum class ErrorKind {
  kInvalidInstance,
  kDegenerateInstance,
  kParameter,
  kResourceLimit,
  kInvalidAgsp,
  kSingularFixedPoint,
  kConvergence,
  kIllConditioned,
  kInternalOrdering,
  kInvalidNoise,
  kConfig,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Singular or near-singular linear solve. Carries the reciprocal condition
/// estimate of the offending matrix.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double rcond)
      : Error(ErrorKind::kIllConditioned, what), rcond_(rcond) {}

  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

/// Power iteration that failed to settle.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorKind::kConvergence, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace dqe
