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

#include "lcd/sensor_model.hpp"

#include <cmath>

#include "lcd/error.hpp"

namespace lcd {

namespace {

Vec3 gaussian3(std::mt19937_64& rng, double sigma) {
  if (sigma == 0.0) return Vec3::Zero();
  std::normal_distribution<double> n(0.0, sigma);
  const double x = n(rng);
  const double y = n(rng);
  const double z = n(rng);
  return Vec3(x, y, z);
}

}  // namespace

void SensorNoiseParams::validate() const {
  for (double s : {acc, gyro, acc_bias, gyro_bias, force, torque, force_bias, torque_bias}) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      fail(ErrorKind::kDomain, "sensor noise standard deviations must be finite and non-negative");
    }
  }
}

double SensorNoiseParams::white(double sigma_100hz, double rate) const {
  return sigma_100hz * std::sqrt(rate / 100.0);
}

double SensorNoiseParams::walk(double sigma_100hz, double rate) const {
  // Continuous density sigma / sqrt(100), integrated over one sample period.
  return sigma_100hz / (10.0 * std::sqrt(rate));
}

Vec3 gravity_reading(const Mat3& world_to_foot) {
  return world_to_foot * Vec3(0.0, 0.0, kGravityMagnitude);
}

Wrench corrupt_wrench(const Wrench& clean, SensorBias& bias, const SensorNoiseParams& noise,
                      std::mt19937_64& rng, double rate) {
  Wrench out;
  out.force = clean.force + bias.force + gaussian3(rng, noise.white(noise.force, rate));
  out.torque = clean.torque + bias.torque + gaussian3(rng, noise.white(noise.torque, rate));
  bias.force += gaussian3(rng, noise.walk(noise.force_bias, rate));
  bias.torque += gaussian3(rng, noise.walk(noise.torque_bias, rate));
  return out;
}

ImuSample corrupt_imu(const Vec3& acc_world, const Vec3& ang_vel_world, const Mat3& world_to_foot,
                      SensorBias& bias, const SensorNoiseParams& noise, std::mt19937_64& rng,
                      double rate) {
  check_rotation(world_to_foot);
  ImuSample out;
  out.acc = world_to_foot * acc_world + gravity_reading(world_to_foot) + bias.acc +
            gaussian3(rng, noise.white(noise.acc, rate));
  out.gyro = world_to_foot * ang_vel_world + bias.gyro + gaussian3(rng, noise.white(noise.gyro, rate));
  bias.acc += gaussian3(rng, noise.walk(noise.acc_bias, rate));
  bias.gyro += gaussian3(rng, noise.walk(noise.gyro_bias, rate));
  return out;
}

ImuSample corrupt_imu(const FootState& foot, SensorBias& bias, const SensorNoiseParams& noise,
                      std::mt19937_64& rng, double rate) {
  return corrupt_imu(foot.lin_acc, foot.ang_vel, foot.world_to_foot(), bias, noise, rng, rate);
}

std::vector<SensorFrame> simulate_sensors(std::span<const GroundTruthFrame> frames,
                                          const SensorNoiseParams& noise, double rate,
                                          std::uint64_t seed) {
  noise.validate();
  if (!(rate > 0.0)) fail(ErrorKind::kDomain, "sensor rate must be positive");
  std::vector<SensorFrame> out;
  out.reserve(2 * frames.size());
  std::mt19937_64 rng(seed);
  std::array<SensorBias, 2> bias{};
  for (const auto& f : frames) {
    for (Leg leg : kLegs) {
      auto& b = bias[index(leg)];
      SensorFrame s;
      s.t = f.t;
      s.leg = leg;
      s.wrench = corrupt_wrench(f.wrench_of(leg), b, noise, rng, rate);
      s.imu = corrupt_imu(f.foot(leg), b, noise, rng, rate);
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace lcd
