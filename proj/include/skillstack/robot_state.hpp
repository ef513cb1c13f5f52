// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "skillstack/types.hpp"

namespace skillstack {

// Per-tick skill phase as recorded in logs and state messages.
enum class SkillPhase : std::uint8_t { Idle = 0, Running = 1, Finishing = 2, Aborted = 3 };

std::string_view to_string(SkillPhase phase);

// Snapshot of the simulated robot.
// 
// tau_commanded, tau_external and ee_wrench_external describe the values
// applied during the most recent control period.
struct RobotState {
  std::uint64_t tick = 0;
  std::uint64_t wall_ns = 0;
  JointVector q = JointVector::Zero();
  JointVector dq = JointVector::Zero();
  JointVector tau_commanded = JointVector::Zero();
  JointVector tau_external = JointVector::Zero();
  Pose ee_pose;
  Wrench ee_wrench_external;
  double gripper_width = 0.0;
  bool gripper_moving = false;
  std::optional<std::uint32_t> active_skill_id;
  SkillPhase skill_phase = SkillPhase::Idle;

  bool operator==(const RobotState&) const = default;
};

}  // namespace skillstack
