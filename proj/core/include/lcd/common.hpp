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

#ifndef LCD_COMMON_HPP_
#define LCD_COMMON_HPP_

#include <array>
#include <cstddef>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace lcd {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kGravityMagnitude = 9.81;

// Gravitational acceleration in the world frame (z up).
inline Vec3 gravity_vector() { return Vec3(0.0, 0.0, -kGravityMagnitude); }

enum class Leg { kLeft = 0, kRight = 1 };
inline constexpr std::array<Leg, 2> kLegs = {Leg::kLeft, Leg::kRight};

inline constexpr std::size_t index(Leg leg) { return static_cast<std::size_t>(leg); }
inline constexpr Leg other(Leg leg) { return leg == Leg::kLeft ? Leg::kRight : Leg::kLeft; }

std::string_view to_string(Leg leg);
Leg parse_leg(std::string_view text);

// Contact force and torque about the contact point.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();

  bool operator==(const Wrench&) const = default;
};

struct ImuSample {
  Vec3 acc = Vec3::Zero();
  Vec3 gyro = Vec3::Zero();

  bool operator==(const ImuSample&) const = default;
};

// Throws ErrorKind::kRotation unless r is orthonormal with det +1.
void check_rotation(const Mat3& r, double tol = 1e-9);

// Rotation of the world frame into a foot frame yawed by `yaw` and pitched by
// `pitch` (foot-to-world is Rz(yaw) * Ry(pitch)).
Mat3 world_to_foot(double yaw, double pitch);

}  // namespace lcd

#endif  // LCD_COMMON_HPP_
