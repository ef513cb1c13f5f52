// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/termination.hpp"

#include <algorithm>
#include <cmath>

#include "skillstack/kinematics.hpp"

namespace skillstack::skill {

std::string_view to_string(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::Time: return "time";
    case TerminationCause::JointGoal: return "joint_goal";
    case TerminationCause::PoseGoal: return "pose_goal";
    case TerminationCause::Contact: return "contact";
    case TerminationCause::SafetyCap: return "safety_cap";
    case TerminationCause::WallViolation: return "wall_violation";
    case TerminationCause::Preempt: return "preempt";
    case TerminationCause::CommandError: return "command_error";
  }
  return "unknown";
}

std::uint64_t duration_ticks(double seconds) {
  const long long ticks = std::llround(seconds * kTicksPerSecond);
  return static_cast<std::uint64_t>(std::max(1LL, ticks));
}

namespace {

bool settled(const RobotState& s) { return s.dq.cwiseAbs().maxCoeff() < kArrivalJointSpeed; }

}  // namespace

std::optional<TerminationCause> evaluate_termination(const TermSpec& term, const RobotState& state,
                                                     std::uint64_t start_tick, const GoalContext& goal) {
  return std::visit(
      [&](const auto& k) -> std::optional<TerminationCause> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, TimeTerm>) {
          const std::uint64_t elapsed = state.tick >= start_tick ? state.tick - start_tick : 0;
          if (elapsed >= duration_ticks(k.duration)) return TerminationCause::Time;
        } else if constexpr (std::is_same_v<T, JointGoalTerm>) {
          if (goal.gripper_width) {
            if (std::abs(state.gripper_width - *goal.gripper_width) < k.tolerance && !state.gripper_moving) {
              return TerminationCause::JointGoal;
            }
          } else if (goal.joint) {
            if ((state.q - *goal.joint).cwiseAbs().maxCoeff() < k.tolerance && settled(state)) {
              return TerminationCause::JointGoal;
            }
          }
        } else if constexpr (std::is_same_v<T, PoseGoalTerm>) {
          if (goal.pose) {
            const Vector6 e = pose_error(state.ee_pose, *goal.pose);
            if (e.head<3>().norm() < k.position_tolerance && e.tail<3>().norm() < k.orientation_tolerance &&
                settled(state)) {
              return TerminationCause::PoseGoal;
            }
          }
        } else if constexpr (std::is_same_v<T, ContactTerm>) {
          const Vector6 w = state.ee_wrench_external.as_vector().cwiseAbs();
          if ((w.array() > k.force_threshold.array()).any()) return TerminationCause::Contact;
        } else {
          for (const TermSpec& child : k.children) {
            if (auto c = evaluate_termination(child, state, start_tick, goal)) return c;
          }
        }
        return std::nullopt;
      },
      term.kind);
}

}  // namespace skillstack::skill
