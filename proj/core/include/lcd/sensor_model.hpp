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

#ifndef LCD_SENSOR_MODEL_HPP_
#define LCD_SENSOR_MODEL_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lcd/common.hpp"
#include "lcd/gait_sim.hpp"

namespace lcd {

// Discrete-time standard deviations at 100 Hz. White-noise terms scale with
// sqrt(rate / 100) at other rates; bias terms are random-walk drive rates.
struct SensorNoiseParams {
  double acc = 0.008;           // m/s^2
  double gyro = 0.005;          // rad/s
  double acc_bias = 0.001;      // m/s^3
  double gyro_bias = 0.006;     // rad/s^2
  double force = 0.7;           // N
  double torque = 0.03;         // N m
  double force_bias = 0.001;    // N/s
  double torque_bias = 0.001;   // N m/s

  static SensorNoiseParams zero() { return {0, 0, 0, 0, 0, 0, 0, 0}; }
  void validate() const;

  // Per-sample white-noise std at `rate` Hz.
  double white(double sigma_100hz, double rate) const;
  // Per-sample random-walk increment std at `rate` Hz.
  double walk(double sigma_100hz, double rate) const;
};

struct SensorBias {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  Vec3 acc = Vec3::Zero();
  Vec3 gyro = Vec3::Zero();
};

struct SensorFrame {
  double t = 0.0;
  Leg leg = Leg::kLeft;
  Wrench wrench;
  ImuSample imu;
};

// Accelerometer reading of gravity alone. Readings are specific force, so a
// level foot at rest reads +9.81 along its z axis.
Vec3 gravity_reading(const Mat3& world_to_foot);

// clean + bias + white noise; the bias then takes one random-walk step.
Wrench corrupt_wrench(const Wrench& clean, SensorBias& bias, const SensorNoiseParams& noise,
                      std::mt19937_64& rng, double rate = 100.0);

// Accelerometer: R acc + R (0, 0, g) + bias + noise. Gyro: R omega + bias + noise.
// Throws ErrorKind::kRotation for a non-orthonormal world_to_foot.
ImuSample corrupt_imu(const Vec3& acc_world, const Vec3& ang_vel_world, const Mat3& world_to_foot,
                      SensorBias& bias, const SensorNoiseParams& noise, std::mt19937_64& rng,
                      double rate = 100.0);
ImuSample corrupt_imu(const FootState& foot, SensorBias& bias, const SensorNoiseParams& noise,
                      std::mt19937_64& rng, double rate = 100.0);

// One SensorFrame per leg per tick (left first), independent bias walks per
// channel and leg. Deterministic for a fixed seed.
std::vector<SensorFrame> simulate_sensors(std::span<const GroundTruthFrame> frames,
                                          const SensorNoiseParams& noise, double rate,
                                          std::uint64_t seed);

}  // namespace lcd

#endif  // LCD_SENSOR_MODEL_HPP_
