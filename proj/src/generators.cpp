// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/generators.hpp"

#include <algorithm>
#include <cmath>

#include "skillstack/kinematics.hpp"

namespace skillstack::skill {

StreamedJointFollower::StreamedJointFollower(const JointVector& start, const JointVector& target,
                                             const JointVector& rate_limit)
    : output_(start), target_(target), rate_limit_(rate_limit) {}

JointSample StreamedJointFollower::advance(double dt) {
  const JointVector max_step = rate_limit_ * dt;
  const JointVector delta = (target_ - output_).cwiseMax(-max_step).cwiseMin(max_step);
  output_ += delta;
  return {output_, delta / dt};
}

StreamedPoseFollower::StreamedPoseFollower(const Pose& start, const Pose& target, double linear_limit,
                                           double angular_limit)
    : output_(start), target_(target), linear_limit_(linear_limit), angular_limit_(angular_limit) {}

PoseSample StreamedPoseFollower::advance(double dt) {
  Eigen::Vector3d dp = target_.position() - output_.position();
  const double max_linear = linear_limit_ * dt;
  if (dp.norm() > max_linear) {
    dp *= max_linear / dp.norm();
  }
  Eigen::Vector3d dr = rotation_log(target_.orientation() * output_.orientation().conjugate());
  const double max_angular = angular_limit_ * dt;
  if (dr.norm() > max_angular) {
    dr *= max_angular / dr.norm();
  }
  output_ = Pose(output_.position() + dp, rotation_exp(dr) * output_.orientation());
  return {output_, Twist{dp / dt, dr / dt}};
}

TrajectoryGenerator::TrajectoryGenerator(const TrajGenSpec& spec, const RobotState& live, const ArmModel& model)
    : model_(&model),
      state_(std::visit(
          [&](const auto& g) -> decltype(state_) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, MinJerkJoint>) {
              return MinJerkJointState{live.q, g};
            } else if constexpr (std::is_same_v<T, MinJerkPose>) {
              return MinJerkPoseState{live.ee_pose, g};
            } else if constexpr (std::is_same_v<T, JointDmp>) {
              return DmpState{DmpRollout(g, live.q)};
            } else if constexpr (std::is_same_v<T, StreamedJointSetpoint>) {
              return StreamedJointFollower(live.q, g.initial, model.dq_max);
            } else if constexpr (std::is_same_v<T, StreamedPoseSetpoint>) {
              return StreamedPoseFollower(live.ee_pose, g.initial, model.ee_linear_speed_max,
                                          model.ee_angular_speed_max);
            } else if constexpr (std::is_same_v<T, Hold>) {
              return HoldState{live.q, live.ee_pose};
            } else if constexpr (std::is_same_v<T, GripperMove>) {
              return GripperState{live.q, g.command};
            } else {
              return WrenchState{g};
            }
          },
          spec)) {}

Setpoint TrajectoryGenerator::evaluate(std::uint64_t elapsed_ticks) {
  const double t = static_cast<double>(elapsed_ticks) * kControlPeriod;
  Setpoint out;
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MinJerkJointState>) {
          out.joint = traj_minjerk_joint(s.start, s.spec, t);
        } else if constexpr (std::is_same_v<T, MinJerkPoseState>) {
          out.pose = traj_minjerk_pose(s.start, s.spec, t);
        } else if constexpr (std::is_same_v<T, DmpState>) {
          out.joint = JointSample{s.rollout.position(), s.rollout.velocity()};
          s.rollout.step(kControlPeriod);
        } else if constexpr (std::is_same_v<T, StreamedJointFollower>) {
          out.joint = s.advance(kControlPeriod);
        } else if constexpr (std::is_same_v<T, StreamedPoseFollower>) {
          out.pose = s.advance(kControlPeriod);
        } else if constexpr (std::is_same_v<T, HoldState>) {
          out.joint = JointSample{s.q, JointVector::Zero()};
          out.pose = PoseSample{s.pose, Twist{}};
        } else if constexpr (std::is_same_v<T, GripperState>) {
          out.joint = JointSample{s.q, JointVector::Zero()};
        } else {
          const auto active_ticks = static_cast<std::uint64_t>(std::llround(s.spec.duration * kTicksPerSecond));
          out.wrench = elapsed_ticks < active_ticks ? s.spec.wrench : Wrench{};
        }
      },
      state_);
  return out;
}

void TrajectoryGenerator::apply(const SensorUpdate& update) {
  bool accepted = false;
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StreamedJointFollower>) {
          if (const auto* p = std::get_if<JointSetpoint>(&update.payload)) {
            s.set_target(p->q);
            accepted = true;
          } else if (const auto* g = std::get_if<GoalOverride>(&update.payload)) {
            if (const auto* q = std::get_if<JointVector>(&g->goal)) {
              s.set_target(*q);
              accepted = true;
            }
          }
        } else if constexpr (std::is_same_v<T, StreamedPoseFollower>) {
          if (const auto* p = std::get_if<PoseSetpoint>(&update.payload)) {
            s.set_target(p->pose);
            accepted = true;
          } else if (const auto* g = std::get_if<GoalOverride>(&update.payload)) {
            if (const auto* pose = std::get_if<Pose>(&g->goal)) {
              s.set_target(*pose);
              accepted = true;
            }
          }
        } else if constexpr (std::is_same_v<T, DmpState>) {
          if (const auto* g = std::get_if<GoalOverride>(&update.payload)) {
            if (const auto* q = std::get_if<JointVector>(&g->goal)) {
              s.rollout.set_goal(*q);
              accepted = true;
            }
          }
        }
      },
      state_);
  if (!accepted) {
    throw TypeMismatch("sensor payload not admissible for this trajectory generator (topic '" + update.topic + "')");
  }
}

GoalContext TrajectoryGenerator::goal() const {
  GoalContext g;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MinJerkJointState>) {
          g.joint = s.spec.goal;
          g.pose = forward_kinematics(*model_, s.spec.goal);
        } else if constexpr (std::is_same_v<T, MinJerkPoseState>) {
          g.pose = s.spec.goal;
        } else if constexpr (std::is_same_v<T, DmpState>) {
          g.joint = s.rollout.goal();
          g.pose = forward_kinematics(*model_, s.rollout.goal());
        } else if constexpr (std::is_same_v<T, StreamedJointFollower>) {
          g.joint = s.target();
          g.pose = forward_kinematics(*model_, s.target());
        } else if constexpr (std::is_same_v<T, StreamedPoseFollower>) {
          g.pose = s.target();
        } else if constexpr (std::is_same_v<T, HoldState>) {
          g.joint = s.q;
          g.pose = s.pose;
        } else if constexpr (std::is_same_v<T, GripperState>) {
          g.gripper_width = s.command.target_width;
        }
      },
      state_);
  return g;
}

std::optional<GripperCommand> TrajectoryGenerator::gripper_command() const {
  if (const auto* s = std::get_if<GripperState>(&state_)) {
    return s->command;
  }
  return std::nullopt;
}

}  // namespace skillstack::skill
