// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/dmp.hpp"

#include <cmath>
#include <string>

namespace skillstack::skill {

DmpBasis DmpBasis::make(std::uint32_t n_basis, double alpha_x) {
  if (n_basis < kMinBasis || n_basis > kMaxBasis) {
    throw std::invalid_argument("n_basis must be in [2, 64], got " + std::to_string(n_basis));
  }
  DmpBasis b;
  const Eigen::Index n = n_basis;
  b.centers.resize(n);
  b.widths.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    b.centers[i] = std::exp(-alpha_x * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double gap = b.centers[i + 1] - b.centers[i];
    b.widths[i] = 4.0 * std::log(2.0) / (gap * gap);
  }
  b.widths[n - 1] = b.widths[n - 2];
  return b;
}

Eigen::VectorXd DmpBasis::normalized_activations(double x) const {
  Eigen::VectorXd psi = (-widths.array() * (x - centers.array()).square()).exp().matrix();
  const double sum = psi.sum();
  if (!(sum > 0.0)) {
    return Eigen::VectorXd::Zero(psi.size());
  }
  return psi / sum;
}

JointDmp dmp_fit(const Demonstration& demo, std::uint32_t n_basis, double alpha, double beta, double alpha_x,
                 double regularization) {
  const std::size_t n = demo.samples.size();
  if (n < 10) {
    throw DegenerateDemo("demonstration needs at least 10 samples");
  }
  if (!std::isfinite(demo.dt) || demo.dt <= 0.0) {
    throw DegenerateDemo("demonstration has zero duration");
  }
  for (const JointVector& s : demo.samples) {
    if (!s.allFinite()) throw DegenerateDemo("demonstration contains non-finite samples");
  }

  const DmpBasis basis = DmpBasis::make(n_basis, alpha_x);
  const double dt = demo.dt;
  const double tau = demo.duration();
  const JointVector& y0 = demo.samples.front();
  const JointVector& goal = demo.samples.back();

  // Phase sequence exactly as DmpRollout integrates it.
  Eigen::MatrixXd activation(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_basis));
  Eigen::VectorXd phase(static_cast<Eigen::Index>(n));
  double x = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    phase[row] = x;
    activation.row(row) = basis.normalized_activations(x).transpose();
    x -= alpha_x * x * dt / tau;
  }

  // Derivative estimates consistent with the semi-implicit integrator:
  // backward difference for velocity, central second difference for
  // acceleration, demo held at rest outside its span.
  Eigen::MatrixXd f_target(static_cast<Eigen::Index>(n), kNumJoints);
  for (std::size_t k = 0; k < n; ++k) {
    const JointVector& y = demo.samples[k];
    const JointVector& y_prev = demo.samples[k == 0 ? 0 : k - 1];
    const JointVector& y_next = demo.samples[k + 1 < n ? k + 1 : n - 1];
    const JointVector dy = (y - y_prev) / dt;
    const JointVector ddy = (y_next - 2.0 * y + y_prev) / (dt * dt);
    const JointVector f = tau * tau * ddy - alpha * (beta * (goal - y) - tau * dy);
    f_target.row(static_cast<Eigen::Index>(k)) = f.transpose();
  }

  JointDmp out;
  out.n_basis = n_basis;
  out.weights = Eigen::MatrixXd::Zero(n_basis, kNumJoints);
  out.goal = goal;
  out.tau = tau;
  out.alpha = alpha;
  out.beta = beta;
  out.alpha_x = alpha_x;

  const Eigen::MatrixXd reg = regularization * Eigen::MatrixXd::Identity(n_basis, n_basis);
  for (int j = 0; j < kNumJoints; ++j) {
    const double span = goal[j] - y0[j];
    const Eigen::MatrixXd features = (activation.array().colwise() * (phase.array() * span)).matrix();
    const Eigen::MatrixXd normal = features.transpose() * features + reg;
    out.weights.col(j) = normal.ldlt().solve(features.transpose() * f_target.col(j));
  }
  return out;
}

DmpRollout::DmpRollout(const JointDmp& spec, const JointVector& start)
    : spec_(spec), basis_(DmpBasis::make(spec.n_basis, spec.alpha_x)), y0_(start), goal_(spec.goal), y_(start) {}

JointVector DmpRollout::forcing() const {
  const Eigen::VectorXd a = basis_.normalized_activations(x_);
  const JointVector weighted = spec_.weights.transpose() * a;
  return x_ * (goal_ - y0_).cwiseProduct(weighted);
}

std::pair<JointVector, JointVector> DmpRollout::step(double dt) {
  const double tau = spec_.tau;
  const JointVector f = forcing();
  z_ += (dt / tau) * (spec_.alpha * (spec_.beta * (goal_ - y_) - z_) + f);
  y_ += (dt / tau) * z_;
  x_ -= spec_.alpha_x * x_ * dt / tau;
  return {y_, velocity()};
}

}  // namespace skillstack::skill
