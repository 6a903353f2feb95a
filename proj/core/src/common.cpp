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

#include "lcd/common.hpp"

#include <cmath>
#include <string>

#include "lcd/error.hpp"

namespace lcd {

std::string_view to_string(Leg leg) { return leg == Leg::kLeft ? "left" : "right"; }

Leg parse_leg(std::string_view text) {
  if (text == "left" || text == "l" || text == "0") return Leg::kLeft;
  if (text == "right" || text == "r" || text == "1") return Leg::kRight;
  fail(ErrorKind::kFormat, "unknown leg '" + std::string(text) + "'");
}

void check_rotation(const Mat3& r, double tol) {
  if (!r.allFinite()) fail(ErrorKind::kRotation, "rotation has non-finite entries");
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > tol || std::abs(r.determinant() - 1.0) > tol) {
    fail(ErrorKind::kRotation, "rotation matrix is not orthonormal");
  }
}

Mat3 world_to_foot(double yaw, double pitch) {
  const Mat3 foot_to_world =
      (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) * Eigen::AngleAxisd(pitch, Vec3::UnitY()))
          .toRotationMatrix();
  return foot_to_world.transpose();
}

}  // namespace lcd
