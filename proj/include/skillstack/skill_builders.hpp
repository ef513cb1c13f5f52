// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <string>

#include "skillstack/skill_spec.hpp"

// Convenience constructors for the common skills. The client SDK builds the
// same specs on its side; every one of them must pass validate_skill.
namespace skillstack::skill {

// Extra time granted after the nominal motion before the Time cap fires.
constexpr double kSettleAllowance = 2.0;

SkillSpec go_to_joints(const JointVector& goal, double duration = 3.0,
                       const JointVector& kp = JointVector::Constant(600.0));
SkillSpec go_to_pose(const Pose& goal, double duration = 3.0, bool use_impedance = true);
SkillSpec execute_joint_dmp(const JointDmp& dmp);
SkillSpec goto_gripper(double width, double speed = 0.05, double force = 0.0);
SkillSpec open_gripper(double speed = 0.05);
SkillSpec close_gripper(double speed = 0.05, double force = 0.0);
SkillSpec apply_force(const Wrench& wrench, double duration);
SkillSpec stream_joint_setpoints(const std::string& topic, const JointVector& initial, double duration);
SkillSpec stream_pose_setpoints(const std::string& topic, const Pose& initial, double duration);
SkillSpec hold(double duration, Passthrough internal = {});

}  // namespace skillstack::skill
