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

#include "dqe/errors.hpp"

namespace dqe {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInstance:
      return "invalid-instance";
    case ErrorKind::kDegenerateInstance:
      return "degenerate-instance";
    case ErrorKind::kParameter:
      return "parameter";
    case ErrorKind::kResourceLimit:
      return "resource-limit";
    case ErrorKind::kInvalidAgsp:
      return "invalid-agsp";
    case ErrorKind::kSingularFixedPoint:
      return "singular-fixed-point";
    case ErrorKind::kConvergence:
      return "convergence";
    case ErrorKind::kIllConditioned:
      return "ill-conditioned-instrument";
    case ErrorKind::kInternalOrdering:
      return "internal-ordering";
    case ErrorKind::kInvalidNoise:
      return "invalid-noise";
    case ErrorKind::kConfig:
      return "config";
  }
  return "unknown";
}

}  // namespace dqe
