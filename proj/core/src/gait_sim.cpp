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

#include "lcd/gait_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lcd/error.hpp"

namespace lcd {

namespace {

constexpr double kCapShrink = 1.0 - 1e-12;

// Quintic rest-to-rest blend and its derivatives.
double blend(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double blend_d(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double blend_dd(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }

// Swing height bump 64 s^3 (1-s)^3.
double bump(double s) { return 64.0 * std::pow(s * (1.0 - s), 3); }
double bump_d(double s) { return 192.0 * std::pow(s * (1.0 - s), 2) * (1.0 - 2.0 * s); }
double bump_dd(double s) {
  const double u = s * (1.0 - s);
  return 192.0 * (2.0 * u * (1.0 - 2.0 * s) * (1.0 - 2.0 * s) - 2.0 * u * u);
}

// Toe-off then heel-strike pitch profile, zero rate at both ends.
double pitch_shape(double s) {
  constexpr double k2pi = 2.0 * std::numbers::pi;
  return 0.5 * std::sin(k2pi * s) - 0.25 * std::sin(2.0 * k2pi * s);
}
double pitch_shape_d(double s) {
  constexpr double k2pi = 2.0 * std::numbers::pi;
  return std::numbers::pi * (std::cos(k2pi * s) - std::cos(2.0 * k2pi * s));
}

template <typename V>
double max_abs(const V& v) {
  return v.cwiseAbs().maxCoeff();
}

template <int N>
struct SlipAdvance {
  Eigen::Matrix<double, N, 1> applied;
  Eigen::Matrix<double, N, 1> vel_start;
  Eigen::Matrix<double, N, 1> displacement;
};

template <int N>
SlipAdvance<N> advance_slip(SlipAxis<N>& st, const Eigen::Matrix<double, N, 1>& demand,
                            double cap, double inertia, double breakaway,
                            const RobotParams& params, double dt) {
  using Vec = Eigen::Matrix<double, N, 1>;
  if (!(dt > 0.0)) fail(ErrorKind::kDomain, "contact step requires dt > 0");
  const int n = std::max(1, params.slip_substeps);
  const double h = dt / n;
  const double tau = params.slip_damping_time;
  const double cap_in = cap * kCapShrink;
  const double demand_norm = demand.norm();

  SlipAdvance<N> out{Vec::Zero(), st.sliding ? st.vel : Vec::Zero(), Vec::Zero()};
  for (int i = 0; i < n; ++i) {
    if (!st.sliding) {
      if (demand_norm <= cap) {
        st.creep.setZero();
        out.applied += demand;
        continue;
      }
      const Vec held = demand * (cap_in / demand_norm);
      out.applied += held;
      st.creep += h * (-(demand - held) / inertia - st.creep / tau);
      if (max_abs(st.creep) > breakaway) {
        st.sliding = true;
        st.vel = st.creep;
        st.creep.setZero();
      }
      continue;
    }
    const Vec friction = -cap_in * st.vel.normalized();
    const Vec acc = (friction - demand) / inertia - st.vel / tau;
    Vec next = st.vel + h * acc;
    if (next.dot(st.vel) <= 0.0) next.setZero();
    out.displacement += 0.5 * h * (st.vel + next);
    out.applied += friction;
    st.vel = next;
    if (max_abs(st.vel) <= breakaway) {
      st.sliding = false;
      st.creep = demand_norm > cap ? st.vel : Vec::Zero();
      st.vel.setZero();
    }
  }
  out.applied /= n;
  return out;
}

double lerp(double a, double b, double s) { return a + (b - a) * s; }

}  // namespace

// ---------------------------------------------------------------------------
// RobotParams / Terrain

void RobotParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::kDomain, std::string("invalid robot parameters: ") + what);
  };
  require(mass > 0.0, "mass must be positive");
  require(com_height > 0.0, "com_height must be positive");
  require(foot_half_length > 0.0 && foot_half_width > 0.0, "foot half-extents must be positive");
  require(step_duration > 0.0, "step_duration must be positive");
  require(double_support_fraction > 0.0 && double_support_fraction < 1.0,
          "double_support_fraction must lie in (0, 1)");
  require(sensor_rate == 100.0 || sensor_rate == 500.0, "sensor_rate must be 100 or 500 Hz");
  require(step_width > 0.0, "step_width must be positive");
  require(min_load_share > 0.0 && min_load_share < 0.5, "min_load_share must lie in (0, 0.5)");
  require(standstill_duration > 0.0, "standstill_duration must be positive");
  require(step_jitter >= 0.0 && step_jitter < 0.5, "step_jitter must lie in [0, 0.5)");
  require(lateral_jitter >= 0.0 && lateral_jitter < 0.4, "lateral_jitter must lie in [0, 0.4)");
  require(foot_mass_fraction > 0.0, "foot_mass_fraction must be positive");
  require(slip_damping_time > 0.0, "slip_damping_time must be positive");
  require(breakaway_speed > 0.0 && breakaway_rate > 0.0, "breakaway thresholds must be positive");
  require(cop_roll_fraction >= 0.0 && cop_roll_fraction < 1.0, "cop_roll_fraction must lie in [0, 1)");
}

double RobotParams::natural_frequency() const { return std::sqrt(kGravityMagnitude / com_height); }

void Terrain::validate() const {
  if (patches.empty()) fail(ErrorKind::kCoverage, "terrain has no friction patches");
  for (std::size_t i = 0; i < patches.size(); ++i) {
    if (!(patches[i].mu_xy > 0.0) || !(patches[i].mu_z > 0.0)) {
      fail(ErrorKind::kDomain, "friction coefficients must be positive");
    }
    if (i > 0 && !(patches[i].segment_start > patches[i - 1].segment_start)) {
      fail(ErrorKind::kCoverage, "terrain patches must be strictly ordered along x");
    }
  }
  if (!(end > patches.back().segment_start)) fail(ErrorKind::kCoverage, "terrain ends before its last patch");
}

bool Terrain::covers(double x) const {
  return !patches.empty() && x >= patches.front().segment_start && x < end;
}

const FrictionParams& Terrain::at(double x) const {
  if (!covers(x)) fail(ErrorKind::kCoverage, "terrain does not cover x = " + std::to_string(x));
  auto it = std::upper_bound(patches.begin(), patches.end(), x,
                             [](double v, const FrictionParams& p) { return v < p.segment_start; });
  return *std::prev(it);
}

Terrain uniform_terrain(double mu, double torsion_factor) {
  Terrain t;
  t.patches.push_back({mu, mu * torsion_factor, -1e9});
  return t;
}

Terrain mixed_terrain(double mu_min, double mu_max, double length, std::uint64_t seed, int levels,
                      double patch_length, double torsion_factor) {
  if (!(mu_min > 0.0) || !(mu_max >= mu_min) || levels < 1 || !(patch_length > 0.0)) {
    fail(ErrorKind::kDomain, "invalid mixed terrain specification");
  }
  std::vector<double> values(levels);
  for (int i = 0; i < levels; ++i) {
    const double u = levels == 1 ? 0.0 : static_cast<double>(i) / (levels - 1);
    values[i] = mu_min + (mu_max - mu_min) * u;
  }
  std::mt19937_64 rng(seed);
  Terrain t;
  // Start on the highest-friction patch so that the quiet stance is not slipping.
  t.patches.push_back({values.back(), values.back() * torsion_factor, -1e9});
  std::vector<double> order;
  for (double x = patch_length; x < length + patch_length; x += patch_length) {
    if (order.empty()) {
      order = values;
      std::shuffle(order.begin(), order.end(), rng);
    }
    const double mu = order.back();
    order.pop_back();
    t.patches.push_back({mu, mu * torsion_factor, x});
  }
  return t;
}

Terrain slip_scenario_terrain(double step_length, double torsion_factor) {
  Terrain t;
  const double mus[] = {0.5, 0.05, 0.1, 0.5};
  t.patches.push_back({mus[0], mus[0] * torsion_factor, -1e9});
  for (int k = 1; k < 4; ++k) {
    t.patches.push_back({mus[k], mus[k] * torsion_factor, (k + 0.5) * step_length});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Footsteps and phases

FootstepPlan plan_footsteps(const RobotParams& params, int n_steps, const Terrain& terrain,
                            std::uint64_t seed) {
  params.validate();
  terrain.validate();
  if (n_steps < 2) fail(ErrorKind::kDomain, "plan_footsteps requires at least two steps");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-params.step_jitter, params.step_jitter);
  std::uniform_real_distribution<double> sidestep(-params.lateral_jitter, params.lateral_jitter);
  const bool perturb = seed != 0;

  FootstepPlan plan;
  const double half = 0.5 * params.step_width;
  plan.initial[index(Leg::kLeft)] = Vec3(0.0, half, 0.0);
  plan.initial[index(Leg::kRight)] = Vec3(0.0, -half, 0.0);
  for (Leg leg : kLegs) plan.initial_friction[index(leg)] = terrain.at(plan.initial[index(leg)].x());

  double x = 0.0;
  Leg leg = Leg::kRight;
  for (int k = 0; k < n_steps; ++k) {
    const double length = params.step_length * (perturb ? 1.0 + jitter(rng) : 1.0);
    const double duration = params.step_duration * (perturb ? 1.0 + jitter(rng) : 1.0);
    x += length;
    const double y = (leg == Leg::kLeft ? half : -half) +
                     (perturb ? params.step_width * sidestep(rng) : 0.0);
    const Vec3 target(x, y, 0.0);
    plan.steps.push_back({leg, target, duration, terrain.at(target.x())});
    leg = other(leg);
  }
  return plan;
}

int steps_for_duration(const RobotParams& params, double seconds) {
  const double walking = seconds - 2.0 * params.standstill_duration -
                         params.double_support_fraction * params.step_duration;
  return std::max(2, static_cast<int>(std::floor(walking / params.step_duration)));
}

GaitPlan::GaitPlan(const RobotParams& params, FootstepPlan footsteps)
    : params_(params), footsteps_(std::move(footsteps)), omega_(params.natural_frequency()) {
  params_.validate();
  const auto& steps = footsteps_.steps;
  if (steps.size() < 2) fail(ErrorKind::kDomain, "gait plan requires at least two steps");

  const double d = params_.double_support_fraction;
  const double w = params_.min_load_share;
  const double roll = params_.cop_roll_fraction * params_.foot_half_length;
  std::array<Vec3, 2> pos = footsteps_.initial;

  auto zmp_of = [&](const std::array<double, 2>& share, const std::array<double, 2>& cop) {
    Eigen::Vector2d z = Eigen::Vector2d::Zero();
    for (Leg l : kLegs) {
      const std::size_t i = index(l);
      z += share[i] * (pos[i].head<2>() + Eigen::Vector2d(cop[i], 0.0));
    }
    return z;
  };
  double t = 0.0;
  auto push = [&](PhaseKind kind, double duration, int step, std::array<double, 2> s0,
                  std::array<double, 2> s1, std::array<double, 2> cop0,
                  std::array<double, 2> cop1) {
    GaitPhase ph{kind, t, t + duration, step, s0, s1, cop0, zmp_of(s0, cop0), zmp_of(s1, cop1)};
    phases_.push_back(ph);
    t += duration;
  };
  auto shares = [](Leg a, double wa, double wb) {
    std::array<double, 2> s{};
    s[index(a)] = wa;
    s[index(other(a))] = wb;
    return s;
  };

  const std::array<double, 2> even{0.5, 0.5};
  const std::array<double, 2> zero{0.0, 0.0};
  push(PhaseKind::kStand, params_.standstill_duration, -1, even, even, zero, zero);
  {
    const Leg stance = other(steps[0].leg);
    push(PhaseKind::kDoubleSupport, d * steps[0].duration, -1, even, shares(stance, 1.0 - w, w),
         zero, zero);
  }
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Leg swing = steps[k].leg;
    const Leg stance = other(swing);
    const double ss = (1.0 - d) * steps[k].duration;
    const double ds = d * steps[k].duration;
    std::array<double, 2> cop_a = zero, cop_b = zero;
    cop_a[index(stance)] = -roll;
    cop_b[index(stance)] = roll;
    // Single support: the ZMP rolls heel to toe under the stance foot.
    {
      GaitPhase ph{PhaseKind::kSingleSupport, t, t + ss, static_cast<int>(k),
                   shares(stance, 1.0, 0.0), shares(stance, 1.0, 0.0), cop_a,
                   zmp_of(shares(stance, 1.0, 0.0), cop_a), zmp_of(shares(stance, 1.0, 0.0), cop_b)};
      phases_.push_back(ph);
      t += ss;
    }
    pos[index(swing)] = steps[k].target;
    std::array<double, 2> cop{};
    cop[index(swing)] = -roll;
    cop[index(stance)] = roll;
    const bool last = k + 1 == steps.size();
    push(PhaseKind::kDoubleSupport, ds, static_cast<int>(k), shares(swing, w, 1.0 - w),
         last ? even : shares(swing, 1.0 - w, w), cop, cop);
  }
  push(PhaseKind::kStand, params_.standstill_duration, -1, even, even, zero, zero);

  // Single-support phases carry a rolling CoP: store it as cop0 -> cop1 via the
  // ZMP endpoints; `cop` holds the heel value.
  segments_.resize(phases_.size());
  for (std::size_t j = 0; j < phases_.size(); ++j) {
    const auto& ph = phases_[j];
    segments_[j].zmp0 = ph.zmp0;
    segments_[j].zmp_rate = (ph.zmp1 - ph.zmp0) / (ph.t1 - ph.t0);
  }
  // Divergent component, backward from rest on the final ZMP.
  Eigen::Vector2d xi_end = phases_.back().zmp1;
  for (std::size_t j = phases_.size(); j-- > 0;) {
    const double T = phases_[j].t1 - phases_[j].t0;
    auto& seg = segments_[j];
    const Eigen::Vector2d z_end = seg.zmp0 + seg.zmp_rate * T;
    seg.unstable = xi_end - z_end - seg.zmp_rate / omega_;
    xi_end = seg.zmp0 + seg.zmp_rate / omega_ + seg.unstable * std::exp(-omega_ * T);
  }
  // Convergent component, forward from the CoM at rest on the initial DCM.
  Eigen::Vector2d c0 = xi_end;
  for (std::size_t j = 0; j < phases_.size(); ++j) {
    const double T = phases_[j].t1 - phases_[j].t0;
    auto& seg = segments_[j];
    const double eT = std::exp(-omega_ * T);
    seg.stable = c0 - seg.zmp0 - 0.5 * seg.unstable * eT;
    c0 = seg.zmp0 + seg.zmp_rate * T + 0.5 * seg.unstable + seg.stable * eT;
  }
}

std::size_t GaitPlan::phase_index(double t) const {
  auto it = std::upper_bound(phases_.begin(), phases_.end(), t,
                             [](double v, const GaitPhase& p) { return v < p.t0; });
  std::size_t i = it == phases_.begin() ? 0 : static_cast<std::size_t>(it - phases_.begin()) - 1;
  return std::min(i, phases_.size() - 1);
}

Eigen::Vector2d GaitPlan::zmp(double t) const {
  const std::size_t j = phase_index(t);
  return segments_[j].zmp0 + segments_[j].zmp_rate * (t - phases_[j].t0);
}

Eigen::Vector2d lipm_acceleration(const Vec3& com, const Eigen::Vector2d& pivot, double com_height) {
  const double w2 = kGravityMagnitude / com_height;
  return w2 * (com.head<2>() - pivot);
}

CentroidalState lipm_com_trajectory(const GaitPlan& plan, double t) {
  if (!(t >= 0.0) || t > plan.duration()) {
    fail(ErrorKind::kDomain, "time " + std::to_string(t) + " outside the gait duration");
  }
  const std::size_t j = plan.phase_index(t);
  const auto& seg = plan.segments_[j];
  const auto& ph = plan.phases_[j];
  const double w = plan.omega_;
  const double tau = t - ph.t0;
  const double grow = std::exp(w * (tau - (ph.t1 - ph.t0)));
  const double decay = std::exp(-w * tau);

  const Eigen::Vector2d z = seg.zmp0 + seg.zmp_rate * tau;
  const Eigen::Vector2d c = z + 0.5 * seg.unstable * grow + seg.stable * decay;
  const Eigen::Vector2d cd = seg.zmp_rate + 0.5 * w * seg.unstable * grow - w * seg.stable * decay;

  CentroidalState s;
  s.com_pos << c, plan.params().com_height;
  s.com_vel << cd, 0.0;
  s.com_acc << w * w * (c - z), 0.0;
  return s;
}

// ---------------------------------------------------------------------------
// Wrenches

std::vector<Vec3> close_moment_balance(const CentroidalState& state, std::span<const StanceFoot> feet,
                                       std::span<const Vec3> forces, double mass) {
  if (feet.empty()) fail(ErrorKind::kContact, "no stance foot to carry the load");
  if (forces.size() != feet.size()) fail(ErrorKind::kShape, "one force per stance foot required");
  Vec3 ref = Vec3::Zero();
  double total_share = 0.0;
  for (const auto& f : feet) {
    ref += f.pos;
    total_share += f.load_share;
  }
  ref /= static_cast<double>(feet.size());
  if (!(total_share > 0.0)) fail(ErrorKind::kContact, "stance feet carry no load share");

  // Moments about a point near the feet keep the balance well conditioned far
  // from the world origin; the total force matches m (c'' - g), so the moment
  // balance is unchanged.
  Vec3 moment = mass * (state.com_pos - ref).cross(state.com_acc - CentroidalState::gravity()) +
                state.ang_mom_rate;
  for (std::size_t i = 0; i < feet.size(); ++i) moment -= (feet[i].pos - ref).cross(forces[i]);

  std::vector<Vec3> torques;
  torques.reserve(feet.size());
  for (const auto& f : feet) torques.push_back(moment * (f.load_share / total_share));
  return torques;
}

std::vector<Wrench> compute_ground_reaction_wrench(const CentroidalState& state,
                                                   std::span<const StanceFoot> feet,
                                                   const RobotParams& params) {
  if (feet.empty()) fail(ErrorKind::kContact, "no stance foot to carry the load");
  double total_share = 0.0;
  for (const auto& f : feet) total_share += f.load_share;
  const Vec3 total = params.mass * (state.com_acc - CentroidalState::gravity());

  std::vector<Vec3> forces;
  forces.reserve(feet.size());
  for (const auto& f : feet) forces.push_back(total * (f.load_share / total_share));
  const auto torques = close_moment_balance(state, feet, forces, params.mass);

  std::vector<Wrench> out(feet.size());
  for (std::size_t i = 0; i < feet.size(); ++i) out[i] = {forces[i], torques[i]};
  return out;
}

BalanceResiduals newton_euler_residuals(const GroundTruthFrame& frame, double mass) {
  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
  for (Leg leg : kLegs) {
    const auto& foot = frame.foot(leg);
    const Mat3 to_world = foot.world_to_foot().transpose();
    const Vec3 f = to_world * frame.wrench_of(leg).force;
    const Vec3 tau = to_world * frame.wrench_of(leg).torque;
    force += f;
    moment += foot.pos.cross(f) + tau;
  }
  const auto& cs = frame.centroidal;
  const Vec3 net = cs.com_acc - CentroidalState::gravity();
  const double scale = mass * kGravityMagnitude;
  return {(force - mass * net).norm() / scale,
          (moment - mass * cs.com_pos.cross(net) - cs.ang_mom_rate).norm() /
              (scale * std::max(1.0, cs.com_pos.norm()))};
}

// ---------------------------------------------------------------------------
// Contact dynamics

std::string_view to_string(FootMode mode) {
  switch (mode) {
    case FootMode::kStance: return "stance";
    case FootMode::kSwing: return "swing";
    case FootMode::kSlipping: return "slipping";
  }
  return "stance";
}

FootMode parse_foot_mode(std::string_view text) {
  if (text == "stance") return FootMode::kStance;
  if (text == "swing") return FootMode::kSwing;
  if (text == "slipping") return FootMode::kSlipping;
  fail(ErrorKind::kFormat, "unknown foot mode '" + std::string(text) + "'");
}

SlipStep step_contact_dynamics(SlipAxis<2>& state, const Eigen::Vector2d& demand, double cap,
                               const RobotParams& params, double dt) {
  const auto r = advance_slip<2>(state, demand, cap, params.foot_mass(), params.breakaway_speed,
                                 params, dt);
  return {r.applied, r.vel_start, state.sliding ? state.vel : Eigen::Vector2d::Zero(),
          r.displacement, state.sliding};
}

double step_spin_dynamics(SlipAxis<1>& state, double demand, double cap, const RobotParams& params,
                          double dt) {
  const double a = params.foot_half_length, b = params.foot_half_width;
  const double inertia = params.foot_mass() * (a * a + b * b) / 3.0;
  Eigen::Matrix<double, 1, 1> d;
  d << demand;
  advance_slip<1>(state, d, cap, inertia, params.breakaway_rate, params, dt);
  return state.sliding ? state.vel(0) : 0.0;
}

// ---------------------------------------------------------------------------
// Simulator

GaitSimulator::GaitSimulator(GaitPlan plan) : plan_(std::move(plan)) {
  const auto& p = plan_.params();
  dt_ = 1.0 / p.sensor_rate;
  n_ticks_ = static_cast<std::size_t>(std::floor(plan_.duration() * p.sensor_rate + 1e-9)) + 1;
  for (Leg leg : kLegs) {
    auto& f = feet_[index(leg)];
    f.pos = plan_.footsteps().initial[index(leg)];
    f.friction = plan_.footsteps().initial_friction[index(leg)];
  }
}

bool GaitSimulator::done() const { return tick_ >= n_ticks_; }

void GaitSimulator::begin_swing(FootSim& foot, int step) {
  foot.swing_step = step;
  foot.liftoff_pos = foot.pos;
  foot.liftoff_yaw = foot.yaw;
  foot.slip = {};
  foot.spin = {};
}

void GaitSimulator::touch_down(FootSim& foot, int step) {
  const auto& s = plan_.footsteps().steps[static_cast<std::size_t>(step)];
  foot.pos = s.target;
  foot.yaw = 0.0;
  foot.friction = s.friction;
  foot.swing_step = -1;
  foot.slip = {};
  foot.spin = {};
}

GroundTruthFrame GaitSimulator::step() {
  if (done()) fail(ErrorKind::kDomain, "simulation already finished");
  const auto& params = plan_.params();
  const double t = std::min(static_cast<double>(tick_) * dt_, plan_.duration());
  const auto& ph = plan_.phases()[plan_.phase_index(t)];
  const double s = std::clamp((t - ph.t0) / (ph.t1 - ph.t0), 0.0, 1.0);
  const auto& steps = plan_.footsteps().steps;

  std::array<bool, 2> swinging{false, false};
  if (ph.kind == PhaseKind::kSingleSupport) {
    swinging[index(steps[static_cast<std::size_t>(ph.step)].leg)] = true;
  }
  for (Leg leg : kLegs) {
    auto& f = feet_[index(leg)];
    if (swinging[index(leg)] && f.swing_step != ph.step) begin_swing(f, ph.step);
    if (!swinging[index(leg)] && f.swing_step >= 0) touch_down(f, f.swing_step);
  }

  const CentroidalState nominal = lipm_com_trajectory(plan_, t);
  const Vec3 demand_total = params.mass * (nominal.com_acc - CentroidalState::gravity());

  GroundTruthFrame frame;
  frame.t = t;
  std::vector<StanceFoot> stance;
  std::vector<Vec3> applied;
  std::vector<Leg> stance_legs;

  for (Leg leg : kLegs) {
    auto& f = feet_[index(leg)];
    auto& out = frame.feet[index(leg)];
    out.leg = leg;
    if (swinging[index(leg)]) {
      const auto& target = steps[static_cast<std::size_t>(f.swing_step)];
      const double T = ph.t1 - ph.t0;
      const Vec3 delta = target.target - f.liftoff_pos;
      out.pos = f.liftoff_pos + delta * blend(s);
      out.pos.z() = params.swing_height * bump(s);
      out.lin_vel = delta * (blend_d(s) / T);
      out.lin_vel.z() = params.swing_height * bump_d(s) / T;
      out.lin_acc = delta * (blend_dd(s) / (T * T));
      out.lin_acc.z() = params.swing_height * bump_dd(s) / (T * T);
      out.yaw = f.liftoff_yaw * (1.0 - blend(s));
      out.pitch = params.swing_pitch * pitch_shape(s);
      const double yaw_rate = -f.liftoff_yaw * blend_d(s) / T;
      const double pitch_rate = params.swing_pitch * pitch_shape_d(s) / T;
      out.ang_vel = Vec3(0.0, 0.0, yaw_rate) +
                    Eigen::AngleAxisd(out.yaw, Vec3::UnitZ()) * Vec3(0.0, pitch_rate, 0.0);
      out.mode = FootMode::kSwing;
      frame.friction[index(leg)] = target.friction;
      continue;
    }
    const double share = lerp(ph.share0[index(leg)], ph.share1[index(leg)], s);
    const Vec3 demand = share * demand_total;
    const auto slip = step_contact_dynamics(f.slip, demand.head<2>(), f.friction.mu_xy * demand.z(),
                                            params, dt_);
    f.pos.head<2>() += slip.displacement;
    out.pos = f.pos;
    out.yaw = f.yaw;
    out.lin_vel << slip.vel_end, 0.0;
    out.lin_acc << (slip.vel_end - slip.vel_start) / dt_, 0.0;
    frame.friction[index(leg)] = f.friction;
    stance.push_back({leg, f.pos, share});
    applied.push_back(Vec3(slip.applied.x(), slip.applied.y(), demand.z()));
    stance_legs.push_back(leg);
  }

  frame.centroidal = nominal;
  Vec3 total = Vec3::Zero();
  for (const auto& f : applied) total += f;
  frame.centroidal.com_acc = total / params.mass + CentroidalState::gravity();
  const auto torques = close_moment_balance(frame.centroidal, stance, applied, params.mass);

  for (std::size_t i = 0; i < stance.size(); ++i) {
    const Leg leg = stance_legs[i];
    auto& f = feet_[index(leg)];
    auto& out = frame.feet[index(leg)];
    const double fz = applied[i].z();
    const double rate_start = f.spin.sliding ? f.spin.vel(0) : 0.0;
    const double rate = step_spin_dynamics(f.spin, torques[i].z(), f.friction.mu_z * fz, params, dt_);
    f.yaw += 0.5 * (rate_start + rate) * dt_;
    out.ang_vel = Vec3(0.0, 0.0, rate);

    const Mat3 r = out.world_to_foot();
    Wrench w{r * applied[i], r * torques[i]};
    frame.wrench[index(leg)] = w;

    const double fzl = w.force.z();
    const bool cop_ok = std::abs(w.torque.y() / fzl) <= params.foot_half_length &&
                        std::abs(w.torque.x() / fzl) <= params.foot_half_width;
    const bool torsion_ok = std::abs(w.torque.z()) <= f.friction.mu_z * fzl;
    const bool moving = f.slip.sliding || f.spin.sliding;
    out.mode = (moving || !cop_ok || !torsion_ok) ? FootMode::kSlipping : FootMode::kStance;
    if (out.mode == FootMode::kStance) {
      out.lin_vel.setZero();
      out.ang_vel.setZero();
    }
  }
  ++tick_;
  return frame;
}

std::vector<GroundTruthFrame> generate_gait_dataset(const RobotParams& params, const Terrain& terrain,
                                                    int n_steps, std::uint64_t seed) {
  GaitSimulator sim(GaitPlan(params, plan_footsteps(params, n_steps, terrain, seed)));
  std::vector<GroundTruthFrame> frames;
  frames.reserve(static_cast<std::size_t>(sim.plan().duration() * params.sensor_rate) + 2);
  while (!sim.done()) frames.push_back(sim.step());
  return frames;
}

}  // namespace lcd
