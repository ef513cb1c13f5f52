// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/control_laws.hpp"

#include "skillstack/kinematics.hpp"

namespace skillstack::skill {

JointVector joint_pd(const RobotState& state, const JointVector& q_d, const JointVector& dq_d, const JointVector& kp,
                     const JointVector& kd) {
  return kp.cwiseProduct(q_d - state.q) + kd.cwiseProduct(dq_d - state.dq);
}

Vector6 cartesian_impedance_wrench(const RobotState& state, const Pose& pose_d, const Vector6& stiffness,
                                   const Vector6& damping, const Jacobian& j) {
  const Vector6 e = pose_error(state.ee_pose, pose_d);
  return stiffness.cwiseProduct(e) - damping.cwiseProduct(j * state.dq);
}

JointVector cartesian_impedance(const RobotState& state, const Pose& pose_d, const Vector6& stiffness,
                                const Vector6& damping, const Jacobian& j) {
  return j.transpose() * cartesian_impedance_wrench(state, pose_d, stiffness, damping, j);
}

JointVector force_to_torque(const Wrench& wrench, const Jacobian& j) { return j.transpose() * wrench.as_vector(); }

}  // namespace skillstack::skill
