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

#ifndef LCD_LABELER_HPP_
#define LCD_LABELER_HPP_

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "lcd/common.hpp"
#include "lcd/gait_sim.hpp"

namespace lcd {

enum class Substate { kStable, kSlip, kNoContact };
std::string_view to_string(Substate s);
Substate parse_substate(std::string_view text);

// y_sc = 1 exactly when the substate is stable.
struct ContactLabel {
  int y_sc = 0;
  Substate substate = Substate::kNoContact;

  bool operator==(const ContactLabel&) const = default;
};

struct LabelThresholds {
  double f_min = 1.0;   // N
  double eps_v = 1e-3;  // m/s
  double eps_w = 1e-2;  // rad/s

  void validate() const;
};

// Coulomb cone, two-sided CoP bounds and torsion bound, all inclusive.
// Throws ErrorKind::kWrench when f_z < 0.
bool friction_cone_check(const Wrench& w, const FrictionParams& fp, const RobotParams& rp);

// f_z above the floor and every foot-frame velocity component within tolerance.
bool kinematic_stability_check(const Vec3& lin_vel, const Vec3& ang_vel, const Wrench& w,
                               const LabelThresholds& th);
bool kinematic_stability_check(const FootState& foot, const Wrench& w, const LabelThresholds& th);

ContactLabel label_frame(const GroundTruthFrame& frame, Leg leg, const RobotParams& rp,
                         const LabelThresholds& th = {});

// One label pair per frame, indexed by leg.
std::vector<std::array<ContactLabel, 2>> label_dataset(std::span<const GroundTruthFrame> frames,
                                                       const RobotParams& rp,
                                                       const LabelThresholds& th = {});

}  // namespace lcd

#endif  // LCD_LABELER_HPP_
