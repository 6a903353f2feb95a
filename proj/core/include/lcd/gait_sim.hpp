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

#ifndef LCD_GAIT_SIM_HPP_
#define LCD_GAIT_SIM_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcd/common.hpp"

namespace lcd {

// Reduced-order humanoid: constant-height LIPM body, point-contact flat feet.
struct RobotParams {
  std::string name = "custom";
  double mass = 100.0;               // kg
  double com_height = 0.9;           // m
  double foot_half_length = 0.1;     // m, CoP bound along the foot x axis
  double foot_half_width = 0.05;     // m, CoP bound along the foot y axis
  double step_length = 0.3;          // m
  double step_duration = 0.8;        // s, one double + one single support
  double double_support_fraction = 0.4;
  double sensor_rate = 500.0;        // Hz, 100 or 500

  // Gait shaping.
  double step_width = 0.2;           // m, lateral distance between the feet
  double swing_height = 0.08;        // m
  double swing_pitch = 0.25;         // rad, peak toe-off / heel-strike pitch
  double cop_roll_fraction = 0.3;    // CoP rolls heel to toe over +-fraction * half length
  double min_load_share = 0.05;      // load share at touchdown and just before liftoff
  double standstill_duration = 3.0;  // s, quiet double stance before and after walking
  double step_jitter = 0.0;          // relative uniform jitter of step length and duration
  double lateral_jitter = 0.0;       // uniform lateral foothold offset, fraction of step_width

  // Slip model: the sliding foot is a point mass pushed by the leg, resisted by
  // kinetic friction at the cone bound and by viscous leg damping.
  double foot_mass_fraction = 0.02;
  double slip_damping_time = 0.015;  // s
  double breakaway_speed = 2e-3;     // m/s, max-abs sliding speed that keeps a foot sliding
  double breakaway_rate = 2e-2;      // rad/s, same for spinning about the foot normal
  int slip_substeps = 10;

  void validate() const;
  double natural_frequency() const;  // sqrt(g / com_height)
  double foot_mass() const { return foot_mass_fraction * mass; }
};

// Named presets: "atlas-like", "nao-like", "talos-like".
RobotParams robot_preset(const std::string& name);
std::vector<std::string> robot_preset_names();

struct FrictionParams {
  double mu_xy = 1.0;          // planar coefficient
  double mu_z = 0.05;          // rotational coefficient (torsion per unit normal force, m)
  double segment_start = 0.0;  // world x where the patch begins

  bool operator==(const FrictionParams&) const = default;
};

// Friction patches ordered along world x. The last patch extends to `end`.
struct Terrain {
  std::vector<FrictionParams> patches;
  double end = std::numeric_limits<double>::infinity();

  void validate() const;
  bool covers(double x) const;
  // Patch under world x; throws ErrorKind::kCoverage outside the terrain.
  const FrictionParams& at(double x) const;
};

inline constexpr double kDefaultTorsionFactor = 0.05;

Terrain uniform_terrain(double mu, double torsion_factor = kDefaultTorsionFactor);
// `levels` friction values geometrically spaced over [mu_min, mu_max], laid out
// in seeded random order as patches of `patch_length` metres over [0, length].
Terrain mixed_terrain(double mu_min, double mu_max, double length, std::uint64_t seed,
                      int levels = 8, double patch_length = 2.0,
                      double torsion_factor = kDefaultTorsionFactor);
// One patch per foothold of a four-step walk, landing on mu = 0.5, 0.05, 0.1, 0.5.
Terrain slip_scenario_terrain(double step_length,
                              double torsion_factor = kDefaultTorsionFactor);

struct Footstep {
  Leg leg;                  // swing leg that lands here
  Vec3 target;              // contact point
  double duration;          // s, double + single support of this step
  FrictionParams friction;  // patch under the foothold
};

struct FootstepPlan {
  std::array<Vec3, 2> initial;                 // initial contact points
  std::array<FrictionParams, 2> initial_friction;
  std::vector<Footstep> steps;
};

// Alternating footholds (right leg first) spaced step_length apart along +x.
// A nonzero seed together with params.step_jitter perturbs lengths and durations.
FootstepPlan plan_footsteps(const RobotParams& params, int n_steps, const Terrain& terrain,
                            std::uint64_t seed = 0);

enum class PhaseKind { kStand, kDoubleSupport, kSingleSupport };

// Linear load shares, CoP offsets and ZMP over [t0, t1).
struct GaitPhase {
  PhaseKind kind;
  double t0;
  double t1;
  int step;  // footstep index: swing step for single support, landing step for double
  std::array<double, 2> share0;
  std::array<double, 2> share1;
  std::array<double, 2> cop;  // foot-frame x CoP offset per leg at t0
  Eigen::Vector2d zmp0;
  Eigen::Vector2d zmp1;
};

struct CentroidalState {
  Vec3 com_pos = Vec3::Zero();
  Vec3 com_vel = Vec3::Zero();
  Vec3 com_acc = Vec3::Zero();
  Vec3 ang_mom_rate = Vec3::Zero();

  static Vec3 gravity() { return gravity_vector(); }
};

// Closed-form LIPM motion over the piecewise-linear ZMP schedule. The
// divergent component is integrated backward from rest at the end of the walk
// and the CoM follows it forward.
class GaitPlan {
 public:
  GaitPlan(const RobotParams& params, FootstepPlan footsteps);

  const RobotParams& params() const { return params_; }
  const FootstepPlan& footsteps() const { return footsteps_; }
  const std::vector<GaitPhase>& phases() const { return phases_; }
  double duration() const { return phases_.back().t1; }
  double omega() const { return omega_; }

  // Index of the phase containing t (t0 <= t < t1; the end maps to the last).
  std::size_t phase_index(double t) const;
  Eigen::Vector2d zmp(double t) const;

 private:
  friend CentroidalState lipm_com_trajectory(const GaitPlan& plan, double t);

  struct Segment {
    Eigen::Vector2d zmp0;
    Eigen::Vector2d zmp_rate;
    Eigen::Vector2d unstable;  // D: divergent coefficient at the segment end
    Eigen::Vector2d stable;    // K: convergent coefficient at the segment start
  };

  RobotParams params_;
  FootstepPlan footsteps_;
  std::vector<GaitPhase> phases_;
  std::vector<Segment> segments_;
  double omega_;
};

// CoM horizontal acceleration of the LIPM about a pivot: omega^2 (c - pivot).
Eigen::Vector2d lipm_acceleration(const Vec3& com, const Eigen::Vector2d& pivot,
                                  double com_height);

// Throws ErrorKind::kDomain if t lies outside [0, plan.duration()].
CentroidalState lipm_com_trajectory(const GaitPlan& plan, double t);

struct StanceFoot {
  Leg leg;
  Vec3 pos;           // world contact point
  double load_share;  // > 0, shares of all stance feet need not be normalized
};

// Contact force and torque per stance foot in the world frame, about each
// contact point, in the order of `feet`. Forces follow m (c'' - g) split by
// load share; torques close the moment balance and are split the same way.
std::vector<Wrench> compute_ground_reaction_wrench(const CentroidalState& state,
                                                   std::span<const StanceFoot> feet,
                                                   const RobotParams& params);

// Torques that close the moment balance for the given (already applied)
// forces, split by load share.
std::vector<Vec3> close_moment_balance(const CentroidalState& state,
                                       std::span<const StanceFoot> feet,
                                       std::span<const Vec3> forces, double mass);

enum class FootMode { kStance, kSwing, kSlipping };
std::string_view to_string(FootMode mode);
FootMode parse_foot_mode(std::string_view text);

struct FootState {
  Leg leg = Leg::kLeft;
  Vec3 pos = Vec3::Zero();      // world contact point
  Vec3 lin_vel = Vec3::Zero();  // world frame
  Vec3 ang_vel = Vec3::Zero();  // world frame
  Vec3 lin_acc = Vec3::Zero();  // world frame, without gravity
  double yaw = 0.0;
  double pitch = 0.0;
  FootMode mode = FootMode::kStance;

  Mat3 world_to_foot() const { return lcd::world_to_foot(yaw, pitch); }
  Vec3 local_lin_vel() const { return world_to_foot() * lin_vel; }
  Vec3 local_ang_vel() const { return world_to_foot() * ang_vel; }
  Vec3 local_lin_acc() const { return world_to_foot() * lin_acc; }
};

struct GroundTruthFrame {
  double t = 0.0;
  std::array<FootState, 2> feet;
  std::array<Wrench, 2> wrench;  // foot frame, zero for swing feet
  std::array<FrictionParams, 2> friction;
  CentroidalState centroidal;

  const FootState& foot(Leg leg) const { return feet[index(leg)]; }
  const Wrench& wrench_of(Leg leg) const { return wrench[index(leg)]; }
};

struct BalanceResiduals {
  double force;   // |sum f - m (c'' - g)| / (m g)
  double moment;  // moment balance residual / (m g max(1, |c|))
};
BalanceResiduals newton_euler_residuals(const GroundTruthFrame& frame, double mass);

// Sliding state of one contact along N axes (2 for planar, 1 for spin).
template <int N>
struct SlipAxis {
  using Vec = Eigen::Matrix<double, N, 1>;
  bool sliding = false;
  Vec vel = Vec::Zero();    // sliding velocity
  Vec creep = Vec::Zero();  // sub-breakaway velocity accumulated while pinned
};

struct SlipStep {
  Eigen::Vector2d applied;  // mean friction the ground exerts over the tick
  Eigen::Vector2d vel_start;
  Eigen::Vector2d vel_end;
  Eigen::Vector2d displacement;
  bool sliding;
};

// Advances the planar slip state of a loaded foot by dt. `demand` is the
// tangential force the body needs from the ground and `cap` = mu_xy f_z.
// A pinned foot whose demand leaves the cone receives the capped force and
// accumulates creep velocity; it breaks away once the creep exceeds
// params.breakaway_speed and sticks again once the sliding speed drops to or
// below it with the demand back inside the cone.
SlipStep step_contact_dynamics(SlipAxis<2>& state, const Eigen::Vector2d& demand, double cap,
                               const RobotParams& params, double dt);

// One-axis version for spin about the foot normal; returns the new spin rate.
double step_spin_dynamics(SlipAxis<1>& state, double demand, double cap,
                          const RobotParams& params, double dt);

// Stateful reduced-order walking simulator emitting one frame per sensor tick.
class GaitSimulator {
 public:
  explicit GaitSimulator(GaitPlan plan);

  bool done() const;
  std::size_t tick() const { return tick_; }
  GroundTruthFrame step();

  const GaitPlan& plan() const { return plan_; }

 private:
  struct FootSim {
    Vec3 pos = Vec3::Zero();
    double yaw = 0.0;
    SlipAxis<2> slip;
    SlipAxis<1> spin;
    int swing_step = -1;
    Vec3 liftoff_pos = Vec3::Zero();
    double liftoff_yaw = 0.0;
    FrictionParams friction;
  };

  void begin_swing(FootSim& foot, int step);
  void touch_down(FootSim& foot, int step);

  GaitPlan plan_;
  std::array<FootSim, 2> feet_;
  std::size_t tick_ = 0;
  std::size_t n_ticks_;
  double dt_;
};

std::vector<GroundTruthFrame> generate_gait_dataset(const RobotParams& params,
                                                    const Terrain& terrain, int n_steps,
                                                    std::uint64_t seed);

// Number of steps that fills roughly `seconds` of walking for the given robot.
int steps_for_duration(const RobotParams& params, double seconds);

}  // namespace lcd

#endif  // LCD_GAIT_SIM_HPP_
