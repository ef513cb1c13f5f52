// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <array>

#include "skillstack/arm_model.hpp"
#include "skillstack/types.hpp"

namespace skillstack {

// Base-frame transforms of every joint frame plus the end-effector.
struct ChainFrames {
  std::array<Eigen::Isometry3d, kNumJoints> joints;
  Eigen::Isometry3d ee;
};

ChainFrames chain_frames(const ArmModel& model, const JointVector& q);

Pose forward_kinematics(const ArmModel& model, const JointVector& q);

// Geometric Jacobian at the end-effector, base frame. Rows 0-2 linear,
// rows 3-5 angular.
Jacobian jacobian(const ArmModel& model, const JointVector& q);

// (desired.position - current.position, rotation vector of desired * current^-1).
Vector6 pose_error(const Pose& current, const Pose& desired);

// Damped least-squares pseudo-inverse J^T (J J^T + lambda^2 I)^-1.
Eigen::Matrix<double, kNumJoints, 6> damped_pseudo_inverse(const Jacobian& j, double lambda = 1e-3);

struct LimitFlags {
  bool position = false;
  bool velocity = false;
  bool torque = false;

  bool any() const { return position || velocity || torque; }
  LimitFlags& operator|=(const LimitFlags& o) {
    position |= o.position;
    velocity |= o.velocity;
    torque |= o.torque;
    return *this;
  }
};

struct ClampedCommand {
  JointVector q;
  JointVector dq;
  JointVector tau;
  LimitFlags violated;
};

ClampedCommand clamp_joint_command(const ArmModel& model, const JointVector& q, const JointVector& dq,
                                   const JointVector& tau);

}  // namespace skillstack
