// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace skillstack {

constexpr int kNumJoints = 7;

// Control period of the loop, seconds.
constexpr double kControlPeriod = 0.001;
constexpr int kTicksPerSecond = 1000;

using JointVector = Eigen::Matrix<double, kNumJoints, 1>;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Jacobian = Eigen::Matrix<double, 6, kNumJoints>;

// End-effector pose in the base frame.
// 
// The orientation is kept as a unit quaternion in canonical form (w >= 0) so
// two poses describing the same rotation compare equal. Construction
// renormalizes quaternions that are off unit length by more than 1e-12 and
// throws std::invalid_argument on a zero or non-finite quaternion.
class Pose {
 public:
  Pose();
  Pose(const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation);

  static Pose from_wxyz(const Eigen::Vector3d& position, double w, double x, double y, double z);
  static Pose from_isometry(const Eigen::Isometry3d& transform);

  const Eigen::Vector3d& position() const { return position_; }
  const Eigen::Quaterniond& orientation() const { return orientation_; }
  Eigen::Isometry3d to_isometry() const;

  bool operator==(const Pose& other) const;

 private:
  Eigen::Vector3d position_;
  Eigen::Quaterniond orientation_;
};

struct Twist {
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular = Eigen::Vector3d::Zero();

  Vector6 as_vector() const;
  static Twist from_vector(const Vector6& v);
  bool operator==(const Twist&) const = default;
};

struct Wrench {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();

  Vector6 as_vector() const;
  static Wrench from_vector(const Vector6& v);
  Wrench operator+(const Wrench& other) const;
  bool operator==(const Wrench&) const = default;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

bool all_finite(const Pose& p);
bool all_finite(const Twist& t);
bool all_finite(const Wrench& w);

// Rotation vector (axis * angle, angle in [0, pi]) of a unit quaternion,
// taking the shortest arc. At exactly pi the axis with the larger leading
// component (x, then y, then z) is chosen.
Eigen::Vector3d rotation_log(const Eigen::Quaterniond& q);
Eigen::Quaterniond rotation_exp(const Eigen::Vector3d& rotation_vector);

}  // namespace skillstack
