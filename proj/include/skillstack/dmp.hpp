// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <stdexcept>
#include <vector>

#include "skillstack/skill_spec.hpp"

namespace skillstack::skill {

// Discrete joint-space dynamic movement primitive:
//
//   tau * dz = alpha * (beta * (g - y) - z) + f(x)
//   tau * dy = z
//   tau * dx = -alpha_x * x
//   f(x)     = x * (g - y0) * sum_i(w_i psi_i(x)) / sum_i(psi_i(x))
//
// integrated with semi-implicit Euler (z first, then y with the new z; the
// phase uses forward Euler). Basis centers are spaced evenly in time, hence
// logarithmically in phase, and neighbouring Gaussians cross at 0.5.

constexpr double kDefaultDmpAlpha = 25.0;
constexpr double kDefaultDmpBeta = kDefaultDmpAlpha / 4.0;
constexpr double kDefaultDmpAlphaX = 8.0 / 3.0;
constexpr double kDefaultDmpRegularization = 1e-9;

struct DmpBasis {
  Eigen::VectorXd centers;
  Eigen::VectorXd widths;

  static DmpBasis make(std::uint32_t n_basis, double alpha_x);

  // psi_i(x) / sum_j psi_j(x); all zeros when every activation underflows.
  Eigen::VectorXd normalized_activations(double x) const;
};

class DegenerateDemo : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Uniformly sampled joint trajectory.
struct Demonstration {
  double dt = kControlPeriod;
  std::vector<JointVector> samples;

  double duration() const { return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1); }
};

// Regularized least-squares fit of the forcing term to a demonstration.
// The returned spec has tau = demo duration and goal = final sample.
// Throws DegenerateDemo on fewer than 10 samples, non-positive duration, or
// non-finite data; std::invalid_argument on an out-of-range n_basis.
JointDmp dmp_fit(const Demonstration& demo, std::uint32_t n_basis, double alpha = kDefaultDmpAlpha,
                 double beta = kDefaultDmpBeta, double alpha_x = kDefaultDmpAlphaX,
                 double regularization = kDefaultDmpRegularization);

// Runtime state of a DMP started at a given joint configuration.
class DmpRollout {
 public:
  DmpRollout(const JointDmp& spec, const JointVector& start);

  const JointVector& position() const { return y_; }
  JointVector velocity() const { return z_ / spec_.tau; }
  double phase() const { return x_; }
  const JointVector& goal() const { return goal_; }
  void set_goal(const JointVector& goal) { goal_ = goal; }

  // Advances by dt and returns (position, velocity) after the step.
  std::pair<JointVector, JointVector> step(double dt);

  // Forcing term f(x) for the current phase and start.
  JointVector forcing() const;

 private:
  JointDmp spec_;
  DmpBasis basis_;
  JointVector y0_;
  JointVector goal_;
  JointVector y_;
  JointVector z_ = JointVector::Zero();
  double x_ = 1.0;
};

}  // namespace skillstack::skill
