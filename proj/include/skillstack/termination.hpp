// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "skillstack/generators.hpp"
#include "skillstack/robot_state.hpp"
#include "skillstack/skill_spec.hpp"

namespace skillstack::skill {

enum class TerminationCause : std::uint8_t {
  Time = 0,
  JointGoal = 1,
  PoseGoal = 2,
  Contact = 3,
  SafetyCap = 4,
  WallViolation = 5,
  Preempt = 6,
  CommandError = 7,
};

std::string_view to_string(TerminationCause cause);

// Goal terminators additionally require every joint speed below this, so
// passing through the goal does not count as arriving.
constexpr double kArrivalJointSpeed = 0.01;

// Ticks a Time terminator waits for: round(duration * 1000), at least 1.
std::uint64_t duration_ticks(double seconds);

// Evaluates a terminator against the state reached after a control step.
// `start_tick` is the robot tick at which the skill issued its first command.
std::optional<TerminationCause> evaluate_termination(const TermSpec& term, const RobotState& state,
                                                     std::uint64_t start_tick, const GoalContext& goal);

inline bool should_terminate(const TermSpec& term, const RobotState& state, std::uint64_t start_tick,
                             const GoalContext& goal) {
  return evaluate_termination(term, state, start_tick, goal).has_value();
}

}  // namespace skillstack::skill
