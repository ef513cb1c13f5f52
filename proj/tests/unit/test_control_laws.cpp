// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include <gtest/gtest.h>

#include <random>

#include "skillstack/control_laws.hpp"
#include "skillstack/kinematics.hpp"
#include "skillstack/sim_robot.hpp"
#include "test_support.hpp"

namespace skillstack::skill {
namespace {

using skillstack::testing::panda;

RobotState state_at(const JointVector& q, const JointVector& dq = JointVector::Zero()) {
  RobotState s;
  s.q = q;
  s.dq = dq;
  s.ee_pose = forward_kinematics(*panda(), q);
  return s;
}

TEST(JointPd, ZeroAtZeroErrorAndLinearInGains) {
  const RobotState s = state_at(panda()->q_initial);
  const JointVector kp = JointVector::Constant(200.0), kd = JointVector::Constant(20.0);
  EXPECT_EQ(joint_pd(s, s.q, s.dq, kp, kd), JointVector::Zero());
  const JointVector q_d = s.q + JointVector::LinSpaced(-0.1, 0.1);
  const JointVector t1 = joint_pd(s, q_d, JointVector::Zero(), kp, kd);
  const JointVector t2 = joint_pd(s, q_d, JointVector::Zero(), 2 * kp, kd);
  EXPECT_LT((t2 - 2 * t1).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((t1 - kp.cwiseProduct(q_d - s.q)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CartesianImpedance, ZeroTorqueAtZeroError) {
  const RobotState s = state_at(panda()->q_initial);
  const Jacobian j = jacobian(*panda(), s.q);
  const CartesianImpedance gains;
  EXPECT_LT(cartesian_impedance(s, s.ee_pose, gains.stiffness, gains.damping, j).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CartesianImpedance, LinearInStiffness) {
  const RobotState s = state_at(panda()->q_initial);
  const Jacobian j = jacobian(*panda(), s.q);
  const Pose target(s.ee_pose.position() + Eigen::Vector3d(0.02, -0.01, 0.015),
                    Eigen::Quaterniond(Eigen::AngleAxisd(0.05, Eigen::Vector3d::UnitX())) * s.ee_pose.orientation());
  const Vector6 k = (Vector6() << 300, 250, 200, 30, 20, 10).finished();
  const Vector6 d = Vector6::Constant(10.0);
  const JointVector t1 = cartesian_impedance(s, target, k, d, j);
  const JointVector t3 = cartesian_impedance(s, target, 3 * k, d, j);
  EXPECT_GT(t1.norm(), 1e-3);
  EXPECT_LT((t3 - 3 * t1).cwiseAbs().maxCoeff(), 1e-9);
  // Wrench is K e at rest.
  const Vector6 w = cartesian_impedance_wrench(s, target, k, d, j);
  EXPECT_LT((w - k.cwiseProduct(pose_error(s.ee_pose, target))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CartesianImpedance, DampingOpposesEndEffectorVelocity) {
  const JointVector dq = JointVector::Constant(0.1);
  const RobotState s = state_at(panda()->q_initial, dq);
  const Jacobian j = jacobian(*panda(), s.q);
  const Vector6 d = Vector6::Constant(20.0);
  const Vector6 w = cartesian_impedance_wrench(s, s.ee_pose, Vector6::Zero(), d, j);
  EXPECT_LT((w + d.cwiseProduct(j * dq)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ForceToTorque, MatchesFiniteDifferenceJacobianTranspose) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.8, 1.8);
  std::uniform_real_distribution<double> f(-20.0, 20.0);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    JointVector q;
    for (int i = 0; i < kNumJoints; ++i) q[i] = u(rng);
    Vector6 wv;
    for (int i = 0; i < 6; ++i) wv[i] = f(rng);
    Jacobian fd;
    for (int i = 0; i < kNumJoints; ++i) {
      JointVector qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const Pose pp = forward_kinematics(*panda(), qp), pm = forward_kinematics(*panda(), qm);
      fd.block<3, 1>(0, i) = (pp.position() - pm.position()) / (2 * h);
      fd.block<3, 1>(3, i) = rotation_log(pp.orientation() * pm.orientation().conjugate()) / (2 * h);
    }
    const JointVector tau = force_to_torque(Wrench::from_vector(wv), jacobian(*panda(), q));
    // Scale by |w| so the 1e-6 Jacobian bound carries over.
    EXPECT_LT((tau - fd.transpose() * wv).cwiseAbs().maxCoeff() / wv.cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(JointPd, CriticallyDampedStepResponseDoesNotOvershoot) {
  const ArmModel& m = *panda();
  SimRobot sim(m, m.q_initial);
  const JointVector kp = JointVector::Constant(100.0);
  const JointVector kd = m.critical_damping(kp);
  const JointVector step = JointVector::Constant(0.1);
  const JointVector q0 = m.q_initial;
  const JointVector q_d = q0 + step;
  JointVector peak = JointVector::Constant(-1e9);
  for (int k = 0; k < 5000; ++k) {
    const JointVector tau = joint_pd(sim.state(), q_d, JointVector::Zero(), kp, kd);
    RobotCommand cmd;
    cmd.mode = ControlMode::ExternalTorque;
    cmd.target = TorqueTarget{tau};
    sim.step(cmd, Wrench{});
    peak = peak.cwiseMax(sim.state().q - q0);
  }
  for (int i = 0; i < kNumJoints; ++i) {
    EXPECT_LT((peak[i] - step[i]) / step[i], 0.01) << "joint " << i;
  }
  EXPECT_LT((sim.state().q - q_d).cwiseAbs().maxCoeff(), 1e-3);
}

}  // namespace
}  // namespace skillstack::skill
