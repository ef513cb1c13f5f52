// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/skill_builders.hpp"

namespace skillstack::skill {

SkillSpec go_to_joints(const JointVector& goal, double duration, const JointVector& kp) {
  SkillSpec s;
  s.type = SkillType::JointPosition;
  s.traj_gen = MinJerkJoint{goal, duration};
  s.feedback = InternalJointPd{kp, JointVector::Zero()};
  s.termination = AnyOfTerm{{JointGoalTerm{1e-3}, TimeTerm{duration + kSettleAllowance}}};
  return s;
}

SkillSpec go_to_pose(const Pose& goal, double duration, bool use_impedance) {
  SkillSpec s;
  s.traj_gen = MinJerkPose{goal, duration};
  if (use_impedance) {
    s.type = SkillType::ImpedancePose;
    s.feedback = CartesianImpedance{};
  } else {
    s.type = SkillType::CartesianPose;
    s.feedback = Passthrough{PassthroughInterface::Position, PassthroughImpedance::Joint};
  }
  s.termination = AnyOfTerm{{PoseGoalTerm{}, TimeTerm{duration + kSettleAllowance}}};
  return s;
}

SkillSpec execute_joint_dmp(const JointDmp& dmp) {
  SkillSpec s;
  s.type = SkillType::JointPosition;
  s.traj_gen = dmp;
  s.feedback = InternalJointPd{};
  s.termination = TimeTerm{dmp.tau * 1.5};
  return s;
}

SkillSpec goto_gripper(double width, double speed, double force) {
  SkillSpec s;
  s.type = SkillType::Gripper;
  s.traj_gen = GripperMove{GripperCommand{width, speed, force}};
  s.feedback = Passthrough{};
  s.termination = JointGoalTerm{1e-3};
  return s;
}

SkillSpec open_gripper(double speed) { return goto_gripper(kGripperMaxWidth, speed, 0.0); }

SkillSpec close_gripper(double speed, double force) { return goto_gripper(0.0, speed, force); }

SkillSpec apply_force(const Wrench& wrench, double duration) {
  SkillSpec s;
  s.type = SkillType::Force;
  s.traj_gen = ConstantWrench{wrench, duration};
  s.feedback = ForceToTorque{};
  s.termination = TimeTerm{duration};
  return s;
}

SkillSpec stream_joint_setpoints(const std::string& topic, const JointVector& initial, double duration) {
  SkillSpec s;
  s.type = SkillType::JointPosition;
  s.traj_gen = StreamedJointSetpoint{initial};
  s.feedback = InternalJointPd{};
  s.termination = TimeTerm{duration};
  s.sensor_topics = {topic};
  return s;
}

SkillSpec stream_pose_setpoints(const std::string& topic, const Pose& initial, double duration) {
  SkillSpec s;
  s.type = SkillType::CartesianPose;
  s.traj_gen = StreamedPoseSetpoint{initial};
  s.feedback = Passthrough{};
  s.termination = TimeTerm{duration};
  s.sensor_topics = {topic};
  return s;
}

SkillSpec hold(double duration, Passthrough internal) {
  SkillSpec s;
  s.type = SkillType::JointPosition;
  s.traj_gen = Hold{};
  s.feedback = internal;
  s.termination = TimeTerm{duration};
  return s;
}

}  // namespace skillstack::skill
