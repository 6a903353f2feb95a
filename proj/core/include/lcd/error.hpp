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

#ifndef LCD_ERROR_HPP_
#define LCD_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lcd {

enum class ErrorKind {
  kDomain,         // argument outside the operation's domain (t, dt, rates)
  kContact,        // no stance foot where one is required
  kCoverage,       // terrain does not cover the walked distance
  kRotation,       // non-orthonormal rotation matrix
  kInput,          // malformed in-memory input (window longer than stream, ...)
  kShape,          // dimension mismatch
  kState,          // missing or stale cached state
  kSchema,         // file columns or model/feature-set mismatch
  kFormat,         // unparsable or truncated file, version mismatch
  kIo,             // unreadable or unwritable path
  kInvalidWrench,  // negative normal force handed to a friction check
  kTraining,       // degenerate training data
  kEvaluation,     // degenerate evaluation data
  kConvergence,    // iterative fit cannot make progress
  kUsage,          // bad command line or configuration
  kNumeric,        // non-finite values produced by a computation
};

std::string_view to_string(ErrorKind kind);

// Process exit code for a failure of the given kind:
// 2 usage, 3 format/schema, 4 numeric failure.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace lcd

#endif  // LCD_ERROR_HPP_
