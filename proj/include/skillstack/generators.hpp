// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <optional>
#include <variant>

#include "skillstack/arm_model.hpp"
#include "skillstack/dmp.hpp"
#include "skillstack/minjerk.hpp"
#include "skillstack/robot_state.hpp"
#include "skillstack/skill_spec.hpp"

namespace skillstack::skill {

// Desired values produced by a trajectory generator for one tick.
struct Setpoint {
  std::optional<JointSample> joint;
  std::optional<PoseSample> pose;
  std::optional<Wrench> wrench;
};

// What goal-based terminators compare against.
struct GoalContext {
  std::optional<JointVector> joint;
  std::optional<Pose> pose;
  std::optional<double> gripper_width;
};

// Rate-limited follower of an externally streamed joint setpoint.
class StreamedJointFollower {
 public:
  StreamedJointFollower(const JointVector& start, const JointVector& target, const JointVector& rate_limit);
  void set_target(const JointVector& target) { target_ = target; }
  const JointVector& target() const { return target_; }
  JointSample advance(double dt);

 private:
  JointVector output_;
  JointVector target_;
  JointVector rate_limit_;
};

// Rate-limited follower of an externally streamed pose setpoint.
class StreamedPoseFollower {
 public:
  StreamedPoseFollower(const Pose& start, const Pose& target, double linear_limit, double angular_limit);
  void set_target(const Pose& target) { target_ = target; }
  const Pose& target() const { return target_; }
  PoseSample advance(double dt);

 private:
  Pose output_;
  Pose target_;
  double linear_limit_;
  double angular_limit_;
};

// Runtime state of a trajectory generator, initialized from the live robot
// state at skill activation. evaluate() is called exactly once per tick.
class TrajectoryGenerator {
 public:
  TrajectoryGenerator(const TrajGenSpec& spec, const RobotState& live, const ArmModel& model);

  // Setpoint for the tick that starts `elapsed_ticks` periods after activation.
  Setpoint evaluate(std::uint64_t elapsed_ticks);

  // Throws TypeMismatch when the payload is not admissible for this generator.
  void apply(const SensorUpdate& update);

  GoalContext goal() const;
  std::optional<GripperCommand> gripper_command() const;

 private:
  struct MinJerkJointState {
    JointVector start;
    MinJerkJoint spec;
  };
  struct MinJerkPoseState {
    Pose start;
    MinJerkPose spec;
  };
  struct DmpState {
    DmpRollout rollout;
  };
  struct HoldState {
    JointVector q;
    Pose pose;
  };
  struct GripperState {
    JointVector q;
    GripperCommand command;
  };
  struct WrenchState {
    ConstantWrench spec;
  };

  const ArmModel* model_;
  std::variant<MinJerkJointState, MinJerkPoseState, DmpState, StreamedJointFollower, StreamedPoseFollower, HoldState,
               GripperState, WrenchState>
      state_;
};

}  // namespace skillstack::skill
