// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <utility>

#include "skillstack/skill_spec.hpp"

namespace skillstack::skill {

struct MinJerkSample {
  double s = 0.0;
  double ds = 0.0;
  double dds = 0.0;
};

// Quintic time scaling s = 10r^3 - 15r^4 + 6r^5 with r = min(t / T, 1),
// plus its time derivatives. Throws InvalidDuration when T <= 0.
MinJerkSample minjerk_scalar(double t, double duration);

struct JointSample {
  JointVector q;
  JointVector dq;
};

JointSample traj_minjerk_joint(const JointVector& start, const MinJerkJoint& spec, double t);

struct PoseSample {
  Pose pose;
  Twist twist;
};

// Position blended linearly and orientation slerped (shortest arc) by s(t).
PoseSample traj_minjerk_pose(const Pose& start, const MinJerkPose& spec, double t);

// Shortest-arc interpolation between two orientations at parameter s.
Eigen::Quaterniond slerp_shortest(const Eigen::Quaterniond& from, const Eigen::Quaterniond& to, double s);

}  // namespace skillstack::skill
