// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/types.hpp"

#include <cmath>
#include <stdexcept>

namespace skillstack {

namespace {

Eigen::Quaterniond canonical(Eigen::Quaterniond q) {
  if (!q.coeffs().allFinite()) {
    throw std::invalid_argument("pose orientation is not finite");
  }
  const double n = q.norm();
  if (n < 1e-12) {
    throw std::invalid_argument("pose orientation has zero norm");
  }
  if (std::abs(n - 1.0) > 1e-12) {
    q.coeffs() /= n;
  }
  if (q.w() < 0.0) {
    q.coeffs() = -q.coeffs();
  }
  return q;
}

}  // namespace

Pose::Pose() : position_(Eigen::Vector3d::Zero()), orientation_(Eigen::Quaterniond::Identity()) {}

Pose::Pose(const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation)
    : position_(position), orientation_(canonical(orientation)) {}

Pose Pose::from_wxyz(const Eigen::Vector3d& position, double w, double x, double y, double z) {
  return Pose(position, Eigen::Quaterniond(w, x, y, z));
}

Pose Pose::from_isometry(const Eigen::Isometry3d& transform) {
  return Pose(transform.translation(), Eigen::Quaterniond(transform.linear()));
}

Eigen::Isometry3d Pose::to_isometry() const {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = orientation_.toRotationMatrix();
  t.translation() = position_;
  return t;
}

bool Pose::operator==(const Pose& other) const {
  return position_ == other.position_ && orientation_.coeffs() == other.orientation_.coeffs();
}

Vector6 Twist::as_vector() const {
  Vector6 v;
  v << linear, angular;
  return v;
}

Twist Twist::from_vector(const Vector6& v) { return Twist{v.head<3>(), v.tail<3>()}; }

Vector6 Wrench::as_vector() const {
  Vector6 v;
  v << force, torque;
  return v;
}

Wrench Wrench::from_vector(const Vector6& v) { return Wrench{v.head<3>(), v.tail<3>()}; }

Wrench Wrench::operator+(const Wrench& other) const {
  return Wrench{force + other.force, torque + other.torque};
}

bool all_finite(const Pose& p) {
  return p.position().allFinite() && p.orientation().coeffs().allFinite();
}
bool all_finite(const Twist& t) { return t.linear.allFinite() && t.angular.allFinite(); }
bool all_finite(const Wrench& w) { return w.force.allFinite() && w.torque.allFinite(); }

Eigen::Vector3d rotation_log(const Eigen::Quaterniond& q_in) {
  double w = q_in.w();
  Eigen::Vector3d v = q_in.vec();
  if (w < 0.0) {
    w = -w;
    v = -v;
  }
  const double n = v.norm();
  if (n == 0.0) {
    return Eigen::Vector3d::Zero();
  }
  if (w == 0.0) {
    // Half-turn: v and -v describe the same rotation.
    for (int i = 0; i < 3; ++i) {
      if (v[i] != 0.0) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
  }
  const double angle = 2.0 * std::atan2(n, w);
  return v * (angle / n);
}

Eigen::Quaterniond rotation_exp(const Eigen::Vector3d& rotation_vector) {
  const double angle = rotation_vector.norm();
  if (angle == 0.0) {
    return Eigen::Quaterniond::Identity();
  }
  const double half = 0.5 * angle;
  const Eigen::Vector3d v = rotation_vector * (std::sin(half) / angle);
  return Eigen::Quaterniond(std::cos(half), v.x(), v.y(), v.z());
}

}  // namespace skillstack
