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


#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lcd/gait_sim.hpp"
#include "lcd/labeler.hpp"
#include "test_support.hpp"

namespace lcd {
namespace {

using lcd::testing::error_kind_of;

RobotParams simple_robot() {
  RobotParams p;
  p.mass = 100.0;
  p.com_height = 0.9;
  return p;
}

TEST(RobotParams, NaturalFrequency) {
  EXPECT_NEAR(simple_robot().natural_frequency(), 3.3015, 5e-5);
}

TEST(RobotParams, RejectsInvalidValues) {
  auto p = simple_robot();
  p.mass = 0.0;
  EXPECT_EQ(error_kind_of([&] { p.validate(); }), ErrorKind::kDomain);
  p = simple_robot();
  p.double_support_fraction = 1.0;
  EXPECT_EQ(error_kind_of([&] { p.validate(); }), ErrorKind::kDomain);
  p = simple_robot();
  p.sensor_rate = 250.0;
  EXPECT_EQ(error_kind_of([&] { p.validate(); }), ErrorKind::kDomain);
}

TEST(RobotParams, PresetsValidateAndUnknownNameIsUsageError) {
  for (const auto& name : robot_preset_names()) EXPECT_NO_THROW(robot_preset(name).validate());
  EXPECT_EQ(error_kind_of([] { robot_preset("asimo"); }), ErrorKind::kUsage);
}

TEST(Terrain, AtSelectsPatchAndEnforcesCoverage) {
  Terrain t;
  t.patches = {{0.5, 0.025, 0.0}, {0.1, 0.005, 1.0}};
  t.end = 2.0;
  EXPECT_DOUBLE_EQ(t.at(0.5).mu_xy, 0.5);
  EXPECT_DOUBLE_EQ(t.at(1.0).mu_xy, 0.1);
  EXPECT_EQ(error_kind_of([&] { t.at(2.5); }), ErrorKind::kCoverage);
  EXPECT_EQ(error_kind_of([&] { t.at(-0.1); }), ErrorKind::kCoverage);
}

TEST(PlanFootsteps, ArithmeticSpacing) {
  auto p = simple_robot();
  p.step_length = 0.3;
  const auto plan = plan_footsteps(p, 2, uniform_terrain(0.5));
  ASSERT_EQ(plan.steps.size(), 2u);
  EXPECT_NEAR(plan.steps[0].target.x(), 0.3, 1e-15);
  EXPECT_NEAR(plan.steps[1].target.x(), 0.6, 1e-15);
  EXPECT_NE(plan.steps[0].leg, plan.steps[1].leg);
}

TEST(PlanFootsteps, SinglePatchAnnotatesEveryFoothold) {
  const auto plan = plan_footsteps(simple_robot(), 12, uniform_terrain(0.5), 9);
  for (const auto& s : plan.steps) EXPECT_DOUBLE_EQ(s.friction.mu_xy, 0.5);
  for (std::size_t k = 1; k < plan.steps.size(); ++k) {
    EXPECT_NE(plan.steps[k].leg, plan.steps[k - 1].leg);
  }
}

TEST(PlanFootsteps, SlipScenarioOrdering) {
  const auto p = robot_preset("atlas-like");
  const auto plan = plan_footsteps(p, 4, slip_scenario_terrain(p.step_length));
  const double expected[] = {0.5, 0.05, 0.1, 0.5};
  for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(plan.steps[k].friction.mu_xy, expected[k]);
}

TEST(PlanFootsteps, Errors) {
  Terrain short_terrain = uniform_terrain(0.5);
  short_terrain.end = 0.5;
  EXPECT_EQ(error_kind_of([&] { plan_footsteps(simple_robot(), 4, short_terrain); }),
            ErrorKind::kCoverage);
  EXPECT_EQ(error_kind_of([&] { plan_footsteps(simple_robot(), 1, uniform_terrain(0.5)); }),
            ErrorKind::kDomain);
}

TEST(Lipm, AccelerationAtOffset) {
  const Vec3 com(0.05, 0.0, 0.9);
  const auto acc = lipm_acceleration(com, Eigen::Vector2d::Zero(), 0.9);
  EXPECT_NEAR(acc.x(), 0.5450, 1e-4);  // 9.81 / 0.9 * 0.05
  EXPECT_EQ(acc.y(), 0.0);
}

TEST(Lipm, EquilibriumOverPivot) {
  const Vec3 com(0.3, -0.1, 0.9);
  EXPECT_EQ(lipm_acceleration(com, Eigen::Vector2d(0.3, -0.1), 0.9), Eigen::Vector2d::Zero());
}

// RK4 integration of c'' = w^2 (c - zmp(t)) from an analytic state must land on
// the analytic trajectory.
TEST(Lipm, TrajectoryMatchesNumericIntegration) {
  const auto p = robot_preset("atlas-like");
  const GaitPlan plan(p, plan_footsteps(p, 6, uniform_terrain(1.0), 5));
  const double w2 = plan.omega() * plan.omega();
  auto accel = [&](double t, const Eigen::Vector2d& c) { return Eigen::Vector2d(w2 * (c - plan.zmp(t))); };

  for (double t0 : {0.5, 3.1, 3.4, 4.0, plan.duration() - 3.5}) {
    const auto s0 = lipm_com_trajectory(plan, t0);
    Eigen::Vector2d c = s0.com_pos.head<2>(), v = s0.com_vel.head<2>();
    const double h = 1e-4;
    const int n = 1500;
    double t = t0;
    for (int i = 0; i < n; ++i) {
      const auto k1v = accel(t, c);
      const auto k1c = v;
      const auto k2v = accel(t + h / 2, c + h / 2 * k1c);
      const auto k2c = v + h / 2 * k1v;
      const auto k3v = accel(t + h / 2, c + h / 2 * k2c);
      const auto k3c = v + h / 2 * k2v;
      const auto k4v = accel(t + h, c + h * k3c);
      const auto k4c = v + h * k3v;
      c += h / 6 * (k1c + 2 * k2c + 2 * k3c + k4c);
      v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
      t += h;
    }
    const auto s1 = lipm_com_trajectory(plan, t);
    EXPECT_LT((s1.com_pos.head<2>() - c).norm(), 1e-6) << "t0=" << t0;
    EXPECT_LT((s1.com_vel.head<2>() - v).norm(), 1e-5) << "t0=" << t0;
  }
}

TEST(Lipm, ConstantHeightAndDomain) {
  const auto p = robot_preset("talos-like");
  const GaitPlan plan(p, plan_footsteps(p, 4, uniform_terrain(1.0), 2));
  for (double t = 0.0; t <= plan.duration(); t += 0.05) {
    const auto s = lipm_com_trajectory(plan, t);
    EXPECT_EQ(s.com_acc.z(), 0.0);
    EXPECT_EQ(s.com_pos.z(), p.com_height);
  }
  EXPECT_EQ(error_kind_of([&] { lipm_com_trajectory(plan, -0.01); }), ErrorKind::kDomain);
  EXPECT_EQ(error_kind_of([&] { lipm_com_trajectory(plan, plan.duration() + 0.01); }),
            ErrorKind::kDomain);
}

TEST(GroundReaction, StaticSymmetricDoubleSupport) {
  CentroidalState s;
  s.com_pos = Vec3(0.0, 0.0, 0.9);
  const StanceFoot feet[] = {{Leg::kLeft, Vec3(0, 0.1, 0), 0.5}, {Leg::kRight, Vec3(0, -0.1, 0), 0.5}};
  const auto w = compute_ground_reaction_wrench(s, feet, simple_robot());
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0].force.z(), 490.5, 1e-9);
  EXPECT_NEAR(w[1].force.z(), 490.5, 1e-9);
}

TEST(GroundReaction, SingleSupport) {
  CentroidalState s;
  s.com_pos = Vec3(0.05, 0.0, 0.9);
  s.com_acc = Vec3(0.5452, 0.0, 0.0);
  const StanceFoot foot[] = {{Leg::kLeft, Vec3::Zero(), 1.0}};
  const auto w = compute_ground_reaction_wrench(s, foot, simple_robot());
  EXPECT_NEAR(w[0].force.z(), 981.0, 1e-9);
  EXPECT_NEAR(w[0].force.x(), 54.52, 1e-9);
  // Moment about the contact point: tau = m c x (c'' - g) with the foot at the origin.
  const Vec3 expected = 100.0 * s.com_pos.cross(s.com_acc - gravity_vector());
  EXPECT_LT((w[0].torque - expected).norm(), 1e-9);
  EXPECT_NEAR(w[0].torque.y(), 100.0 * (0.9 * 0.5452 - 0.05 * 9.81), 1e-9);
}

TEST(GroundReaction, NoStanceFootIsContactError) {
  CentroidalState s;
  EXPECT_EQ(error_kind_of([&] { compute_ground_reaction_wrench(s, {}, simple_robot()); }),
            ErrorKind::kContact);
}

TEST(ContactDynamics, InsideConeStaysPinned) {
  const auto p = robot_preset("atlas-like");
  SlipAxis<2> st;
  const auto r = step_contact_dynamics(st, Eigen::Vector2d(24.0, 32.0), 50.0, p, 0.002);
  EXPECT_FALSE(r.sliding);
  EXPECT_EQ(r.vel_end, Eigen::Vector2d::Zero());
  EXPECT_NEAR((r.applied - Eigen::Vector2d(24.0, 32.0)).norm(), 0.0, 1e-12);
}

TEST(ContactDynamics, OutsideConeSlidesAtCoulombCap) {
  const auto p = robot_preset("atlas-like");
  SlipAxis<2> st;
  SlipStep r{};
  for (int i = 0; i < 5; ++i) r = step_contact_dynamics(st, Eigen::Vector2d(60.0, 0.0), 49.0, p, 0.002);
  EXPECT_TRUE(r.sliding);
  EXPECT_NEAR(r.applied.norm(), 49.0, 1e-9);
  EXPECT_GT(r.vel_end.norm(), 0.0);
  // Friction opposes the sliding direction, which follows the unbalanced demand.
  EXPECT_LT(r.vel_end.x() * r.applied.x(), 0.0);
}

TEST(ContactDynamics, NonPositiveDtIsDomainError) {
  const auto p = robot_preset("atlas-like");
  SlipAxis<2> st;
  SlipAxis<1> spin;
  EXPECT_EQ(error_kind_of([&] { step_contact_dynamics(st, Eigen::Vector2d::Zero(), 1.0, p, 0.0); }),
            ErrorKind::kDomain);
  EXPECT_EQ(error_kind_of([&] { step_spin_dynamics(spin, 0.0, 1.0, p, -1e-3); }), ErrorKind::kDomain);
}

TEST(ContactDynamics, TorsionViolationSpins) {
  const auto p = robot_preset("atlas-like");
  SlipAxis<1> st;
  double w = 0.0;
  for (int i = 0; i < 10; ++i) w = step_spin_dynamics(st, 5.0, 2.0, p, 0.002);
  EXPECT_TRUE(st.sliding);
  EXPECT_NE(w, 0.0);
}

// Balance residuals recomputed here from the world-frame forces, independent of
// the library's residual helper.
void expect_balanced(const GroundTruthFrame& f, double mass) {
  Vec3 force = Vec3::Zero(), moment = Vec3::Zero();
  for (Leg leg : kLegs) {
    const auto& foot = f.foot(leg);
    const Mat3 r = world_to_foot(foot.yaw, foot.pitch).transpose();
    const Vec3 fw = r * f.wrench_of(leg).force;
    force += fw;
    moment += foot.pos.cross(fw) + r * f.wrench_of(leg).torque;
  }
  const Vec3 net = f.centroidal.com_acc + Vec3(0, 0, 9.81);
  const double mg = mass * 9.81;
  ASSERT_LT((force - mass * net).norm() / mg, 1e-9) << "t=" << f.t;
  ASSERT_LT((moment - mass * f.centroidal.com_pos.cross(net)).norm() /
                (mg * std::max(1.0, f.centroidal.com_pos.norm())),
            1e-9)
      << "t=" << f.t;
}

TEST(Simulator, FrameInvariants) {
  for (const auto& name : robot_preset_names()) {
    const auto p = robot_preset(name);
    const int steps = steps_for_duration(p, 120.0);
    const double length = (steps + 4) * p.step_length * 1.5 + 4.0;
    const auto frames = generate_gait_dataset(p, mixed_terrain(0.05, 1.2, length, 4), steps, 4);
    ASSERT_FALSE(frames.empty());
    std::size_t slipping = 0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& f = frames[i];
      if (i > 0) ASSERT_NEAR(f.t - frames[i - 1].t, 1.0 / p.sensor_rate, 1e-9);
      EXPECT_DOUBLE_EQ(f.centroidal.gravity().norm(), 9.81);
      expect_balanced(f, p.mass);
      const auto r = newton_euler_residuals(f, p.mass);
      ASSERT_LT(r.force, 1e-9);
      ASSERT_LT(r.moment, 1e-9);
      for (Leg leg : kLegs) {
        const auto& foot = f.foot(leg);
        if (foot.mode == FootMode::kStance) {
          ASSERT_EQ(foot.lin_vel, Vec3::Zero());
          ASSERT_EQ(foot.ang_vel, Vec3::Zero());
        } else if (foot.mode == FootMode::kSwing) {
          ASSERT_EQ(f.wrench_of(leg), Wrench{});
        } else {
          ++slipping;
        }
      }
    }
    EXPECT_GT(slipping, 0u) << name;
  }
}

TEST(Simulator, Deterministic) {
  const auto p = robot_preset("nao-like");
  const auto terrain = mixed_terrain(0.05, 1.2, 20.0, 3);
  const auto a = generate_gait_dataset(p, terrain, 20, 11);
  const auto b = generate_gait_dataset(p, terrain, 20, 11);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].t, b[i].t);
    for (Leg leg : kLegs) {
      ASSERT_EQ(a[i].wrench_of(leg), b[i].wrench_of(leg));
      ASSERT_EQ(a[i].foot(leg).pos, b[i].foot(leg).pos);
      ASSERT_EQ(a[i].foot(leg).lin_vel, b[i].foot(leg).lin_vel);
      ASSERT_EQ(a[i].foot(leg).mode, b[i].foot(leg).mode);
    }
  }
}

std::size_t count_slipping(const std::vector<GroundTruthFrame>& frames) {
  std::size_t n = 0;
  for (const auto& f : frames) {
    for (Leg leg : kLegs) n += f.foot(leg).mode == FootMode::kSlipping;
  }
  return n;
}

TEST(Simulator, HighFrictionNeverSlips) {
  const auto p = robot_preset("atlas-like");
  const auto frames = generate_gait_dataset(p, uniform_terrain(1.2), steps_for_duration(p, 120.0), 7);
  EXPECT_EQ(count_slipping(frames), 0u);
  // Post-hoc cone scan: no stance wrench leaves the planar cone.
  for (const auto& f : frames) {
    for (Leg leg : kLegs) {
      const auto& w = f.wrench_of(leg);
      if (f.foot(leg).mode == FootMode::kSwing) continue;
      ASSERT_LE(std::hypot(w.force.x(), w.force.y()), 1.2 * w.force.z());
    }
  }
}

TEST(Simulator, SlippingIsMonotoneInFriction) {
  const auto p = robot_preset("atlas-like");
  const int steps = steps_for_duration(p, 60.0);
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (double mu : {0.05, 0.1, 0.5, 1.2}) {
    const std::size_t n = count_slipping(generate_gait_dataset(p, uniform_terrain(mu), steps, 21));
    EXPECT_LE(n, previous) << "mu=" << mu;
    previous = n;
  }
}

TEST(Simulator, SlipScenarioSlipsUnderLoadOnLowFriction) {
  const auto p = robot_preset("atlas-like");
  const auto frames = generate_gait_dataset(p, slip_scenario_terrain(p.step_length), 4, 0);
  std::size_t loaded_slip = 0;
  for (const auto& f : frames) {
    for (Leg leg : kLegs) {
      if (f.foot(leg).mode == FootMode::kSlipping && f.friction[index(leg)].mu_xy == 0.05 &&
          f.wrench_of(leg).force.z() > 0.25 * p.mass * 9.81) {
        ++loaded_slip;
      }
    }
  }
  EXPECT_GT(loaded_slip, 20u);
}

TEST(Simulator, StepsForDurationCoversRequestedTime) {
  const auto p = robot_preset("talos-like");
  const int n = steps_for_duration(p, 60.0);
  const GaitPlan plan(p, plan_footsteps(p, n, uniform_terrain(1.0)));
  EXPECT_GE(plan.duration(), 60.0 - p.step_duration);
}

}  // namespace
}  // namespace lcd
