// Copyright 2026 The LCD Authors
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

#include "lcd/error.hpp"

namespace lcd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kContact: return "contact error";
    case ErrorKind::kCoverage: return "coverage error";
    case ErrorKind::kRotation: return "rotation error";
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kState: return "state error";
    case ErrorKind::kSchema: return "schema error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kInvalidWrench: return "invalid-wrench error";
    case ErrorKind::kTraining: return "training error";
    case ErrorKind::kEvaluation: return "evaluation error";
    case ErrorKind::kConvergence: return "convergence error";
    case ErrorKind::kUsage: return "usage error";
    case ErrorKind::kNumeric: return "numeric error";
  }
  return "error";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kInput:
    case ErrorKind::kCoverage:
    case ErrorKind::kDomain:
      return 2;
    case ErrorKind::kSchema:
    case ErrorKind::kFormat:
    case ErrorKind::kIo:
      return 3;
    default:
      return 4;
  }
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace lcd
