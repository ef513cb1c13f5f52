// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include <gtest/gtest.h>

#include <random>

#include "skillstack/kinematics.hpp"
#include "test_support.hpp"

namespace skillstack {
namespace {

using testing::panda;

struct FkGolden {
  const char* name;
  JointVector q;
  Eigen::Vector3d position;
  Eigen::Vector4d wxyz;
};

// 50-digit evaluation of the same MDH chain (tests/oracles/fk_oracle.py).
std::vector<FkGolden> fk_goldens() {
  JointVector zero = JointVector::Zero();
  JointVector initial;
  initial << 0.0, -0.7853981633974483, 0.0, -2.356194490192345, 0.0, 1.5707963267948966, 0.7853981633974483;
  JointVector mixed;
  mixed << 0.3, -0.5, 0.7, -1.9, 0.4, 1.2, -0.6;
  return {
      {"zero", zero, {0.087999999999999994893, -2.57665686540603113e-17, 0.82260000000000002562},
       {5.6571305614385016724e-17, 0.92387953251128674979, 0.38268343236508978646, -2.3432602026631491306e-17}},
      {"initial", initial, {0.30689056659294116006, -7.8418345397643277443e-17, 0.4868820523028392404},
       {4.3297802811774665263e-17, 0.99999999999999999967, -1.1951547459771031867e-17, -4.0063279191592646816e-33}},
      {"mixed", mixed, {0.085130174326143173258, 0.37397990886779787605, 0.51682259109823634546},
       {0.073225030750433605418, -0.37558432511219755399, -0.91312306440594085377, 0.14064415683389457529}},
  };
}

TEST(Kinematics, ForwardKinematicsMatchesHighPrecisionOracle) {
  for (const FkGolden& g : fk_goldens()) {
    const Pose p = forward_kinematics(*panda(), g.q);
    EXPECT_LT((p.position() - g.position).cwiseAbs().maxCoeff(), 1e-12) << g.name;
    const Eigen::Quaterniond& o = p.orientation();
    const double dot = o.w() * g.wxyz[0] + o.x() * g.wxyz[1] + o.y() * g.wxyz[2] + o.z() * g.wxyz[3];
    // q and -q are the same rotation; near w = 0 the canonical sign is noise.
    EXPECT_NEAR(std::abs(dot), 1.0, 1e-12) << g.name;
    EXPECT_GE(o.w(), 0.0) << g.name;
  }
}

TEST(Kinematics, QuaternionIsUnitNormAndCanonical) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int k = 0; k < 500; ++k) {
    JointVector q;
    for (int i = 0; i < kNumJoints; ++i) q[i] = u(rng);
    const Pose p = forward_kinematics(*panda(), q);
    EXPECT_NEAR(p.orientation().norm(), 1.0, 1e-12);
    EXPECT_GE(p.orientation().w(), 0.0);
  }
}

Jacobian finite_difference_jacobian(const ArmModel& m, const JointVector& q, double h = 1e-6) {
  Jacobian j;
  for (int i = 0; i < kNumJoints; ++i) {
    JointVector qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    const Pose pp = forward_kinematics(m, qp);
    const Pose pm = forward_kinematics(m, qm);
    j.block<3, 1>(0, i) = (pp.position() - pm.position()) / (2 * h);
    j.block<3, 1>(3, i) = rotation_log(pp.orientation() * pm.orientation().conjugate()) / (2 * h);
  }
  return j;
}

TEST(Kinematics, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    JointVector q;
    for (int i = 0; i < kNumJoints; ++i) q[i] = u(rng);
    const Jacobian analytic = jacobian(*panda(), q);
    const Jacobian numeric = finite_difference_jacobian(*panda(), q);
    EXPECT_LT((analytic - numeric).cwiseAbs().maxCoeff(), 1e-6) << "sample " << k;
  }
}

TEST(Kinematics, DampedPseudoInverseIsNearInverseAwayFromSingularities) {
  const JointVector q = panda()->q_initial;
  const Jacobian j = jacobian(*panda(), q);
  const auto pinv = damped_pseudo_inverse(j);
  EXPECT_LT(((j * pinv) - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff(), 1e-3);
  // Singular (stretched) configuration stays bounded.
  const auto pinv0 = damped_pseudo_inverse(jacobian(*panda(), JointVector::Zero()));
  EXPECT_TRUE(pinv0.allFinite());
  EXPECT_LT(pinv0.cwiseAbs().maxCoeff(), 1e4);
}

TEST(Kinematics, PoseErrorIsZeroForIdenticalPoses) {
  const Pose p = forward_kinematics(*panda(), panda()->q_initial);
  EXPECT_EQ(pose_error(p, p), Vector6::Zero());
  const Pose shifted(p.position() + Eigen::Vector3d(0.01, -0.02, 0.03), p.orientation());
  const Vector6 e = pose_error(p, shifted);
  EXPECT_NEAR(e[0], 0.01, 1e-15);
  EXPECT_NEAR(e[1], -0.02, 1e-15);
  EXPECT_NEAR(e[2], 0.03, 1e-15);
  EXPECT_LT(e.tail<3>().norm(), 1e-15);
}

TEST(Kinematics, PoseErrorRotationMatchesAxisAngle) {
  const Pose a(Eigen::Vector3d::Zero(), Eigen::Quaterniond::Identity());
  const Pose b(Eigen::Vector3d::Zero(), Eigen::Quaterniond(Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitZ())));
  const Vector6 e = pose_error(a, b);
  EXPECT_NEAR(e[5], 0.3, 1e-12);
  EXPECT_NEAR(e[3], 0.0, 1e-15);
}

TEST(Kinematics, ClampOrdersTorqueVelocityPosition) {
  const ArmModel& m = *panda();
  JointVector q = m.q_initial;
  JointVector dq = JointVector::Zero();
  JointVector tau = JointVector::Zero();
  auto c = clamp_joint_command(m, q, dq, tau);
  EXPECT_FALSE(c.violated.any());

  tau[0] = 1000.0;
  dq[1] = -50.0;
  q[2] = 10.0;
  c = clamp_joint_command(m, q, dq, tau);
  EXPECT_TRUE(c.violated.torque);
  EXPECT_TRUE(c.violated.velocity);
  EXPECT_TRUE(c.violated.position);
  EXPECT_DOUBLE_EQ(c.tau[0], m.tau_max[0]);
  EXPECT_DOUBLE_EQ(c.dq[1], -m.dq_max[1]);
  EXPECT_DOUBLE_EQ(c.q[2], m.q_max[2]);
}

TEST(Kinematics, ArmModelRejectsBadConfig) {
  EXPECT_THROW(parse_arm_model("[arm]\ndh_a = [0.0]\n", "bad.toml"), ConfigError);
  try {
    std::string text = "[arm]\ndh_a = [0.0, 0.0]\n";
    parse_arm_model(text, "bad.toml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.source(), "bad.toml");
    EXPECT_NE(std::string(e.what()).find("bad.toml"), std::string::npos);
  }
}

TEST(Kinematics, RotationExpLogRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Vector3d v(u(rng), u(rng), u(rng));
    EXPECT_LT((rotation_log(rotation_exp(v)) - v).norm(), 1e-12);
  }
  EXPECT_EQ(rotation_log(Eigen::Quaterniond::Identity()), Eigen::Vector3d::Zero());
}

}  // namespace
}  // namespace skillstack
