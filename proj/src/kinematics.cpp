// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/kinematics.hpp"

#include <algorithm>

namespace skillstack {

namespace {

Eigen::Isometry3d dh_transform(const DhRow& row, double q) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.rotate(Eigen::AngleAxisd(row.alpha, Eigen::Vector3d::UnitX()));
  t.translate(Eigen::Vector3d(row.a, 0.0, 0.0));
  t.rotate(Eigen::AngleAxisd(q + row.theta_offset, Eigen::Vector3d::UnitZ()));
  t.translate(Eigen::Vector3d(0.0, 0.0, row.d));
  return t;
}

}  // namespace

ChainFrames chain_frames(const ArmModel& model, const JointVector& q) {
  ChainFrames frames;
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  for (int i = 0; i < kNumJoints; ++i) {
    t = t * dh_transform(model.dh[static_cast<std::size_t>(i)], q[i]);
    frames.joints[static_cast<std::size_t>(i)] = t;
  }
  frames.ee = t * model.ee_offset.to_isometry();
  return frames;
}

Pose forward_kinematics(const ArmModel& model, const JointVector& q) {
  return Pose::from_isometry(chain_frames(model, q).ee);
}

Jacobian jacobian(const ArmModel& model, const JointVector& q) {
  const ChainFrames frames = chain_frames(model, q);
  const Eigen::Vector3d p_ee = frames.ee.translation();
  Jacobian j;
  for (int i = 0; i < kNumJoints; ++i) {
    const Eigen::Isometry3d& f = frames.joints[static_cast<std::size_t>(i)];
    const Eigen::Vector3d z = f.linear().col(2);
    j.block<3, 1>(0, i) = z.cross(p_ee - f.translation());
    j.block<3, 1>(3, i) = z;
  }
  return j;
}

Vector6 pose_error(const Pose& current, const Pose& desired) {
  Vector6 e;
  e.head<3>() = desired.position() - current.position();
  e.tail<3>() = rotation_log(desired.orientation() * current.orientation().conjugate());
  return e;
}

Eigen::Matrix<double, kNumJoints, 6> damped_pseudo_inverse(const Jacobian& j, double lambda) {
  const Eigen::Matrix<double, 6, 6> jjt = j * j.transpose() + lambda * lambda * Eigen::Matrix<double, 6, 6>::Identity();
  return j.transpose() * jjt.ldlt().solve(Eigen::Matrix<double, 6, 6>::Identity());
}

ClampedCommand clamp_joint_command(const ArmModel& model, const JointVector& q, const JointVector& dq,
                                   const JointVector& tau) {
  ClampedCommand out{q, dq, tau, {}};
  for (int i = 0; i < kNumJoints; ++i) {
    const double qc = std::clamp(q[i], model.q_min[i], model.q_max[i]);
    const double dqc = std::clamp(dq[i], -model.dq_max[i], model.dq_max[i]);
    const double tc = std::clamp(tau[i], -model.tau_max[i], model.tau_max[i]);
    out.violated.position |= qc != q[i];
    out.violated.velocity |= dqc != dq[i];
    out.violated.torque |= tc != tau[i];
    out.q[i] = qc;
    out.dq[i] = dqc;
    out.tau[i] = tc;
  }
  return out;
}

}  // namespace skillstack
