// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/sim_robot.hpp"

#include <cmath>
#include <stdexcept>

#include "skillstack/control_laws.hpp"

namespace skillstack {

std::string_view to_string(SkillPhase phase) {
  switch (phase) {
    case SkillPhase::Idle: return "idle";
    case SkillPhase::Running: return "running";
    case SkillPhase::Finishing: return "finishing";
    case SkillPhase::Aborted: return "aborted";
  }
  return "unknown";
}

CommandInterface command_interface(ControlMode mode) {
  switch (mode) {
    case ControlMode::JointPositionJointImpedance:
    case ControlMode::JointPositionCartesianImpedance: return CommandInterface::JointPosition;
    case ControlMode::JointVelocityJointImpedance:
    case ControlMode::JointVelocityCartesianImpedance: return CommandInterface::JointVelocity;
    case ControlMode::CartesianPoseJointImpedance:
    case ControlMode::CartesianPoseCartesianImpedance: return CommandInterface::CartesianPose;
    case ControlMode::CartesianVelocityJointImpedance:
    case ControlMode::CartesianVelocityCartesianImpedance: return CommandInterface::CartesianVelocity;
    case ControlMode::ExternalTorque: return CommandInterface::Torque;
  }
  return CommandInterface::Torque;
}

InternalImpedance internal_impedance(ControlMode mode) {
  switch (mode) {
    case ControlMode::JointPositionJointImpedance:
    case ControlMode::JointVelocityJointImpedance:
    case ControlMode::CartesianPoseJointImpedance:
    case ControlMode::CartesianVelocityJointImpedance: return InternalImpedance::Joint;
    case ControlMode::ExternalTorque: return InternalImpedance::None;
    default: return InternalImpedance::Cartesian;
  }
}

ControlMode make_control_mode(CommandInterface iface, InternalImpedance internal) {
  const bool joint = internal != InternalImpedance::Cartesian;
  switch (iface) {
    case CommandInterface::JointPosition:
      return joint ? ControlMode::JointPositionJointImpedance : ControlMode::JointPositionCartesianImpedance;
    case CommandInterface::JointVelocity:
      return joint ? ControlMode::JointVelocityJointImpedance : ControlMode::JointVelocityCartesianImpedance;
    case CommandInterface::CartesianPose:
      return joint ? ControlMode::CartesianPoseJointImpedance : ControlMode::CartesianPoseCartesianImpedance;
    case CommandInterface::CartesianVelocity:
      return joint ? ControlMode::CartesianVelocityJointImpedance : ControlMode::CartesianVelocityCartesianImpedance;
    case CommandInterface::Torque: return ControlMode::ExternalTorque;
  }
  return ControlMode::ExternalTorque;
}

std::string_view to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::JointPositionJointImpedance: return "JointPosition/JointImpedance";
    case ControlMode::JointPositionCartesianImpedance: return "JointPosition/CartesianImpedance";
    case ControlMode::JointVelocityJointImpedance: return "JointVelocity/JointImpedance";
    case ControlMode::JointVelocityCartesianImpedance: return "JointVelocity/CartesianImpedance";
    case ControlMode::CartesianPoseJointImpedance: return "CartesianPose/JointImpedance";
    case ControlMode::CartesianPoseCartesianImpedance: return "CartesianPose/CartesianImpedance";
    case ControlMode::CartesianVelocityJointImpedance: return "CartesianVelocity/JointImpedance";
    case ControlMode::CartesianVelocityCartesianImpedance: return "CartesianVelocity/CartesianImpedance";
    case ControlMode::ExternalTorque: return "ExternalTorque";
  }
  return "unknown";
}

bool RobotCommand::valid() const {
  switch (command_interface(mode)) {
    case CommandInterface::JointPosition: return std::holds_alternative<JointPositionTarget>(target);
    case CommandInterface::JointVelocity: return std::holds_alternative<JointVelocityTarget>(target);
    case CommandInterface::CartesianPose: return std::holds_alternative<CartesianPoseTarget>(target);
    case CommandInterface::CartesianVelocity: return std::holds_alternative<CartesianVelocityTarget>(target);
    case CommandInterface::Torque: return std::holds_alternative<TorqueTarget>(target);
  }
  return false;
}

bool RobotCommand::finite() const {
  const bool gains_ok = (!joint_stiffness || joint_stiffness->allFinite()) && (!joint_damping || joint_damping->allFinite());
  return gains_ok && std::visit(
                         [](const auto& t) {
                           using T = std::decay_t<decltype(t)>;
                           if constexpr (std::is_same_v<T, JointPositionTarget>) {
                             return t.q.allFinite() && t.dq.allFinite();
                           } else if constexpr (std::is_same_v<T, JointVelocityTarget>) {
                             return t.dq.allFinite();
                           } else if constexpr (std::is_same_v<T, CartesianPoseTarget>) {
                             return all_finite(t.pose) && all_finite(t.twist);
                           } else if constexpr (std::is_same_v<T, CartesianVelocityTarget>) {
                             return all_finite(t.twist);
                           } else {
                             return t.tau.allFinite();
                           }
                         },
                         target);
}

RobotCommand RobotCommand::hold(const JointVector& q) {
  RobotCommand c;
  c.mode = ControlMode::JointPositionJointImpedance;
  c.target = JointPositionTarget{q, JointVector::Zero()};
  return c;
}

std::optional<std::string> gripper_command_error(const GripperCommand& cmd) {
  if (!std::isfinite(cmd.target_width) || cmd.target_width < 0.0 || cmd.target_width > kGripperMaxWidth) {
    return "gripper target width out of range [0, 0.08] m";
  }
  if (!std::isfinite(cmd.speed) || cmd.speed <= 0.0) {
    return "gripper speed must be positive";
  }
  if (!std::isfinite(cmd.grasp_force) || cmd.grasp_force < 0.0) {
    return "gripper grasp force must be non-negative";
  }
  return std::nullopt;
}

GripperState gripper_step(const GripperState& g, const GripperCommand& cmd, double dt) {
  GripperState next = g;
  const double remaining = cmd.target_width - g.width;
  const double max_step = cmd.speed * dt;
  // Small slack so accumulated rounding cannot leave a sub-ulp step at the end.
  if (std::abs(remaining) <= max_step * (1.0 + 1e-9)) {
    next.width = cmd.target_width;
  } else {
    next.width = g.width + std::copysign(max_step, remaining);
  }
  next.moving = std::abs(next.width - cmd.target_width) >= kGripperArrivalTolerance;
  return next;
}

SimRobot::SimRobot(const ArmModel& model) : SimRobot(model, model.q_initial) {}

SimRobot::SimRobot(const ArmModel& model, const JointVector& q0) : model_(&model) {
  state_.q = q0;
  state_.ee_pose = forward_kinematics(model, q0);
  state_.gripper_width = gripper_.width;
  gripper_cmd_.target_width = gripper_.width;
  reset_internal_reference();
}

void SimRobot::command_gripper(const GripperCommand& cmd) {
  if (auto err = gripper_command_error(cmd)) {
    throw std::invalid_argument(*err);
  }
  gripper_cmd_ = cmd;
  gripper_.moving = std::abs(gripper_.width - cmd.target_width) >= kGripperArrivalTolerance;
  state_.gripper_moving = gripper_.moving;
}

void SimRobot::reset_internal_reference() {
  q_ref_ = state_.q;
  pose_ref_ = state_.ee_pose;
}

JointVector SimRobot::cartesian_torque(const Pose& pose_d, const Twist& twist_d, const Jacobian& j) const {
  const InternalControllerGains& g = model_->internal;
  Vector6 f = skill::cartesian_impedance_wrench(state_, pose_d, g.cartesian_stiffness, g.cartesian_damping, j);
  f += g.cartesian_damping.cwiseProduct(twist_d.as_vector());
  return j.transpose() * f - g.nullspace_damping * state_.dq;
}

JointVector SimRobot::joint_target_torque(const RobotCommand& cmd, const JointVector& q_d, const JointVector& dq_d,
                                          const Jacobian& j, JointVector& reference_q) const {
  reference_q = q_d;
  if (internal_impedance(cmd.mode) == InternalImpedance::Joint) {
    const JointVector kp = cmd.joint_stiffness.value_or(model_->internal.joint_stiffness);
    const JointVector kd = cmd.joint_damping.value_or(model_->critical_damping(kp));
    return skill::joint_pd(state_, q_d, dq_d, kp, kd);
  }
  const Pose pose_d = forward_kinematics(*model_, q_d);
  const Twist twist_d = Twist::from_vector(jacobian(*model_, q_d) * dq_d);
  return cartesian_torque(pose_d, twist_d, j);
}

JointVector SimRobot::pose_target_torque(const RobotCommand& cmd, const Pose& pose_d, const Twist& twist_d,
                                         const Jacobian& j, JointVector& reference_q) const {
  const auto j_pinv = damped_pseudo_inverse(j);
  const JointVector dq_err = j_pinv * pose_error(state_.ee_pose, pose_d);
  reference_q = state_.q + dq_err;
  if (internal_impedance(cmd.mode) == InternalImpedance::Joint) {
    const JointVector kp = cmd.joint_stiffness.value_or(model_->internal.joint_stiffness);
    const JointVector kd = cmd.joint_damping.value_or(model_->critical_damping(kp));
    const JointVector dq_d = j_pinv * twist_d.as_vector();
    return kp.cwiseProduct(dq_err) + kd.cwiseProduct(dq_d - state_.dq);
  }
  return cartesian_torque(pose_d, twist_d, j);
}

JointVector SimRobot::internal_torque(const RobotCommand& cmd, const Jacobian& j, double dt, JointVector& reference_q) {
  switch (command_interface(cmd.mode)) {
    case CommandInterface::JointPosition: {
      const auto& t = std::get<JointPositionTarget>(cmd.target);
      return joint_target_torque(cmd, t.q, t.dq, j, reference_q);
    }
    case CommandInterface::JointVelocity: {
      const auto& t = std::get<JointVelocityTarget>(cmd.target);
      q_ref_ += t.dq * dt;
      return joint_target_torque(cmd, q_ref_, t.dq, j, reference_q);
    }
    case CommandInterface::CartesianPose: {
      const auto& t = std::get<CartesianPoseTarget>(cmd.target);
      return pose_target_torque(cmd, t.pose, t.twist, j, reference_q);
    }
    case CommandInterface::CartesianVelocity: {
      const auto& t = std::get<CartesianVelocityTarget>(cmd.target);
      pose_ref_ = Pose(pose_ref_.position() + t.twist.linear * dt,
                       rotation_exp(t.twist.angular * dt) * pose_ref_.orientation());
      return pose_target_torque(cmd, pose_ref_, t.twist, j, reference_q);
    }
    case CommandInterface::Torque:
      reference_q = state_.q;
      return std::get<TorqueTarget>(cmd.target).tau;
  }
  return JointVector::Zero();
}

StepResult SimRobot::step(const RobotCommand& cmd, const Wrench& injected, double dt) {
  StepResult result;
  const ArmModel& m = *model_;
  const Jacobian j = jacobian(m, state_.q);

  const bool accepted = cmd.valid() && cmd.finite();
  const RobotCommand& effective = accepted ? cmd : RobotCommand::hold(state_.q);
  result.rejected_command = !accepted;
  if (!last_mode_ || *last_mode_ != effective.mode) {
    reset_internal_reference();
    last_mode_ = effective.mode;
  }

  const JointVector tau_raw = internal_torque(effective, j, dt, result.reference_q);
  const JointVector tau_ext = j.transpose() * injected.as_vector();

  ClampedCommand torque = clamp_joint_command(m, state_.q, state_.dq, tau_raw);
  result.limits.torque = torque.violated.torque;
  const JointVector& tau = torque.tau;

  // Semi-implicit Euler on I qdd = tau + tau_ext - b dq.
  const JointVector qdd = (tau + tau_ext - m.viscous_friction.cwiseProduct(state_.dq)).cwiseQuotient(m.inertia);
  JointVector dq = state_.dq + qdd * dt;
  for (int i = 0; i < kNumJoints; ++i) {
    if (std::abs(dq[i]) > m.dq_max[i]) {
      dq[i] = std::copysign(m.dq_max[i], dq[i]);
      result.limits.velocity = true;
    }
  }
  JointVector q = state_.q + dq * dt;
  for (int i = 0; i < kNumJoints; ++i) {
    if (q[i] < m.q_min[i] || q[i] > m.q_max[i]) {
      q[i] = std::clamp(q[i], m.q_min[i], m.q_max[i]);
      dq[i] = 0.0;
      result.limits.position = true;
    }
  }

  state_.q = q;
  state_.dq = dq;
  state_.tau_commanded = tau;
  state_.tau_external = tau_ext;
  state_.ee_wrench_external = injected;
  state_.ee_pose = forward_kinematics(m, q);
  state_.tick += 1;

  gripper_ = gripper_step(gripper_, gripper_cmd_, dt);
  state_.gripper_width = gripper_.width;
  state_.gripper_moving = gripper_.moving;
  return result;
}

}  // namespace skillstack
