// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include "skillstack/robot_state.hpp"
#include "skillstack/types.hpp"

namespace skillstack::skill {

// tau = kp o (q_d - q) + kd o (dq_d - dq)
JointVector joint_pd(const RobotState& state, const JointVector& q_d, const JointVector& dq_d, const JointVector& kp,
                     const JointVector& kd);

// Task-space spring-damper wrench F = K o e - D o (J dq), e = pose_error(ee, pose_d).
Vector6 cartesian_impedance_wrench(const RobotState& state, const Pose& pose_d, const Vector6& stiffness,
                                   const Vector6& damping, const Jacobian& j);

// tau = J^T F with F from cartesian_impedance_wrench.
JointVector cartesian_impedance(const RobotState& state, const Pose& pose_d, const Vector6& stiffness,
                                const Vector6& damping, const Jacobian& j);

JointVector force_to_torque(const Wrench& wrench, const Jacobian& j);

}  // namespace skillstack::skill
