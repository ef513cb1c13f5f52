// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/minjerk.hpp"

#include <algorithm>
#include <cmath>

namespace skillstack::skill {

MinJerkSample minjerk_scalar(double t, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw InvalidDuration("min-jerk duration must be positive");
  }
  const double r = std::clamp(t / duration, 0.0, 1.0);
  if (r >= 1.0) {
    return {1.0, 0.0, 0.0};
  }
  const double r2 = r * r;
  const double r3 = r2 * r;
  MinJerkSample out;
  out.s = r3 * (10.0 + r * (-15.0 + 6.0 * r));
  out.ds = 30.0 * r2 * (1.0 - 2.0 * r + r2) / duration;
  out.dds = 60.0 * r * (1.0 - 3.0 * r + 2.0 * r2) / (duration * duration);
  return out;
}

JointSample traj_minjerk_joint(const JointVector& start, const MinJerkJoint& spec, double t) {
  const MinJerkSample m = minjerk_scalar(t, spec.duration);
  const JointVector delta = spec.goal - start;
  if (m.s == 1.0) {
    return {spec.goal, JointVector::Zero()};
  }
  return {start + m.s * delta, m.ds * delta};
}

Eigen::Quaterniond slerp_shortest(const Eigen::Quaterniond& from, const Eigen::Quaterniond& to, double s) {
  const Eigen::Vector3d rel = rotation_log(to * from.conjugate());
  return rotation_exp(s * rel) * from;
}

PoseSample traj_minjerk_pose(const Pose& start, const MinJerkPose& spec, double t) {
  const MinJerkSample m = minjerk_scalar(t, spec.duration);
  if (m.s == 1.0) {
    return {spec.goal, Twist{}};
  }
  const Eigen::Vector3d dp = spec.goal.position() - start.position();
  const Eigen::Vector3d rel = rotation_log(spec.goal.orientation() * start.orientation().conjugate());
  PoseSample out{Pose(start.position() + m.s * dp, rotation_exp(m.s * rel) * start.orientation()), Twist{}};
  out.twist.linear = m.ds * dp;
  out.twist.angular = m.ds * rel;
  return out;
}

}  // namespace skillstack::skill
