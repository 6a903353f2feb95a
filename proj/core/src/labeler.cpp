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

#include "lcd/labeler.hpp"

#include <cmath>
#include <string>

#include "lcd/error.hpp"

namespace lcd {

std::string_view to_string(Substate s) {
  switch (s) {
    case Substate::kStable: return "stable";
    case Substate::kSlip: return "slip";
    case Substate::kNoContact: return "no_contact";
  }
  return "?";
}

Substate parse_substate(std::string_view text) {
  if (text == "stable") return Substate::kStable;
  if (text == "slip") return Substate::kSlip;
  if (text == "no_contact") return Substate::kNoContact;
  fail(ErrorKind::kFormat, "unknown substate '" + std::string(text) + "'");
}

void LabelThresholds::validate() const {
  if (!(f_min > 0.0) || !(eps_v > 0.0) || !(eps_w > 0.0)) {
    fail(ErrorKind::kDomain, "label thresholds must be positive");
  }
}

bool friction_cone_check(const Wrench& w, const FrictionParams& fp, const RobotParams& rp) {
  const double fz = w.force.z();
  if (fz < 0.0) fail(ErrorKind::kInvalidWrench, "negative normal force in friction cone check");
  // Same expressions the simulator uses to flag CoP and torsion violations.
  const bool planar = std::hypot(w.force.x(), w.force.y()) <= fp.mu_xy * fz;
  const bool cop = std::abs(w.torque.y() / fz) <= rp.foot_half_length &&
                   std::abs(w.torque.x() / fz) <= rp.foot_half_width;
  const bool torsion = std::abs(w.torque.z()) <= fp.mu_z * fz;
  return planar && cop && torsion;
}

bool kinematic_stability_check(const Vec3& lin_vel, const Vec3& ang_vel, const Wrench& w,
                               const LabelThresholds& th) {
  return w.force.z() > th.f_min && lin_vel.cwiseAbs().maxCoeff() <= th.eps_v &&
         ang_vel.cwiseAbs().maxCoeff() <= th.eps_w;
}

bool kinematic_stability_check(const FootState& foot, const Wrench& w, const LabelThresholds& th) {
  return kinematic_stability_check(foot.local_lin_vel(), foot.local_ang_vel(), w, th);
}

ContactLabel label_frame(const GroundTruthFrame& frame, Leg leg, const RobotParams& rp,
                         const LabelThresholds& th) {
  const Wrench& w = frame.wrench_of(leg);
  if (w.force.z() <= th.f_min) return {0, Substate::kNoContact};
  const bool cone = friction_cone_check(w, frame.friction[index(leg)], rp);
  const bool kin = kinematic_stability_check(frame.foot(leg), w, th);
  if (cone && kin) return {1, Substate::kStable};
  return {0, Substate::kSlip};
}

std::vector<std::array<ContactLabel, 2>> label_dataset(std::span<const GroundTruthFrame> frames,
                                                       const RobotParams& rp,
                                                       const LabelThresholds& th) {
  th.validate();
  std::vector<std::array<ContactLabel, 2>> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    out.push_back({label_frame(f, Leg::kLeft, rp, th), label_frame(f, Leg::kRight, rp, th)});
  }
  return out;
}

}  // namespace lcd
