// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "skillstack/generators.hpp"
#include "skillstack/sim_robot.hpp"
#include "skillstack/skill_spec.hpp"
#include "skillstack/termination.hpp"

namespace skillstack::skill {

// One executing skill: generator -> feedback controller -> terminator.
class SkillRunner {
 public:
  // `live` is the robot state at activation; the generator starts from it.
  SkillRunner(std::uint32_t id, SkillSpec spec, const ArmModel& model, const RobotState& live);

  std::uint32_t id() const { return id_; }
  const SkillSpec& spec() const { return spec_; }
  ControlMode mode() const { return mode_; }
  std::uint64_t start_tick() const { return start_tick_; }
  std::uint64_t elapsed_ticks() const { return elapsed_; }

  // Robot command for the current tick. Advances the generator by one tick.
  RobotCommand command(const RobotState& state);

  // Throws TypeMismatch for inadmissible payloads.
  void apply(const SensorUpdate& update) { generator_.apply(update); }
  bool subscribes(std::string_view topic) const;

  std::optional<TerminationCause> check_termination(const RobotState& after_step) const;
  std::optional<GripperCommand> gripper_command() const { return generator_.gripper_command(); }

 private:
  RobotCommand torque_command(const RobotState& state, const Setpoint& sp) const;
  RobotCommand passthrough_command(const RobotState& state, const Setpoint& sp) const;

  std::uint32_t id_;
  SkillSpec spec_;
  const ArmModel* model_;
  ControlMode mode_;
  std::uint64_t start_tick_;
  std::uint64_t elapsed_ = 0;
  TrajectoryGenerator generator_;
};

}  // namespace skillstack::skill
