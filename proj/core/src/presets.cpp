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

#include <string>
#include <vector>

#include "lcd/error.hpp"
#include "lcd/gait_sim.hpp"

namespace lcd {

// Preset values are plausible configuration defaults for each robot class,
// not identified parameters of any particular machine.
RobotParams robot_preset(const std::string& name) {
  RobotParams p;
  p.name = name;
  p.step_jitter = 0.3;
  p.lateral_jitter = 0.25;
  if (name == "atlas-like") {
    p.mass = 175.0;
    p.com_height = 0.85;
    p.foot_half_length = 0.12;
    p.foot_half_width = 0.065;
    p.step_length = 0.5;
    p.step_duration = 0.7;
    p.double_support_fraction = 0.4;
    p.sensor_rate = 500.0;
    p.step_width = 0.30;
    p.cop_roll_fraction = 0.1;
    p.swing_height = 0.1;
    p.swing_pitch = 0.25;
  } else if (name == "talos-like") {
    p.mass = 95.0;
    p.com_height = 0.87;
    p.foot_half_length = 0.105;
    p.foot_half_width = 0.065;
    p.step_length = 0.3;
    p.step_duration = 0.85;
    p.double_support_fraction = 0.4;
    p.sensor_rate = 500.0;
    p.step_width = 0.2;
    p.swing_height = 0.07;
    p.swing_pitch = 0.2;
  } else if (name == "nao-like") {
    p.mass = 5.3;
    p.com_height = 0.26;
    p.foot_half_length = 0.08;
    p.foot_half_width = 0.045;
    p.step_length = 0.08;
    p.step_duration = 0.5;
    p.double_support_fraction = 0.4;
    p.sensor_rate = 100.0;
    p.step_width = 0.1;
    p.swing_height = 0.025;
    p.swing_pitch = 0.15;
  } else {
    fail(ErrorKind::kUsage, "unknown robot preset '" + name + "'");
  }
  p.validate();
  return p;
}

std::vector<std::string> robot_preset_names() { return {"atlas-like", "nao-like", "talos-like"}; }

}  // namespace lcd
