// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/skill_runner.hpp"

#include <algorithm>
#include <stdexcept>

#include "skillstack/control_laws.hpp"
#include "skillstack/kinematics.hpp"

namespace skillstack::skill {

SkillRunner::SkillRunner(std::uint32_t id, SkillSpec spec, const ArmModel& model, const RobotState& live)
    : id_(id),
      spec_(std::move(spec)),
      model_(&model),
      mode_(control_mode_for(spec_)),
      start_tick_(live.tick),
      generator_(spec_.traj_gen, live, model) {}

bool SkillRunner::subscribes(std::string_view topic) const {
  return std::find(spec_.sensor_topics.begin(), spec_.sensor_topics.end(), topic) != spec_.sensor_topics.end();
}

std::optional<TerminationCause> SkillRunner::check_termination(const RobotState& after_step) const {
  return evaluate_termination(spec_.termination, after_step, start_tick_, generator_.goal());
}

RobotCommand SkillRunner::command(const RobotState& state) {
  const Setpoint sp = generator_.evaluate(elapsed_);
  ++elapsed_;
  if (mode_ == ControlMode::ExternalTorque) {
    return torque_command(state, sp);
  }
  return passthrough_command(state, sp);
}

RobotCommand SkillRunner::torque_command(const RobotState& state, const Setpoint& sp) const {
  RobotCommand cmd;
  cmd.mode = ControlMode::ExternalTorque;
  const Jacobian j = jacobian(*model_, state.q);
  JointVector tau;
  if (const auto* pd = std::get_if<InternalJointPd>(&spec_.feedback)) {
    if (!sp.joint) throw std::logic_error("joint PD requires a joint setpoint");
    const JointVector kd = pd->kd.isZero() ? model_->critical_damping(pd->kp) : pd->kd;
    tau = joint_pd(state, sp.joint->q, sp.joint->dq, pd->kp, kd);
  } else if (const auto* imp = std::get_if<CartesianImpedance>(&spec_.feedback)) {
    const Pose pose_d = sp.pose ? sp.pose->pose : forward_kinematics(*model_, sp.joint.value().q);
    tau = cartesian_impedance(state, pose_d, imp->stiffness, imp->damping, j);
  } else if (std::holds_alternative<ForceToTorque>(spec_.feedback)) {
    tau = force_to_torque(sp.wrench.value_or(Wrench{}), j);
  } else {
    throw std::logic_error("feedback controller does not produce torques");
  }
  cmd.target = TorqueTarget{tau};
  return cmd;
}

RobotCommand SkillRunner::passthrough_command(const RobotState& state, const Setpoint& sp) const {
  RobotCommand cmd;
  cmd.mode = mode_;
  if (const auto* pd = std::get_if<InternalJointPd>(&spec_.feedback)) {
    cmd.joint_stiffness = pd->kp;
    if (!pd->kd.isZero()) cmd.joint_damping = pd->kd;
  }
  switch (command_interface(mode_)) {
    case CommandInterface::JointPosition: {
      const JointSample js = sp.joint.value_or(JointSample{state.q, JointVector::Zero()});
      cmd.target = JointPositionTarget{js.q, js.dq};
      break;
    }
    case CommandInterface::JointVelocity:
      cmd.target = JointVelocityTarget{sp.joint ? sp.joint->dq : JointVector::Zero()};
      break;
    case CommandInterface::CartesianPose:
      cmd.target = CartesianPoseTarget{sp.pose.value().pose, sp.pose->twist};
      break;
    case CommandInterface::CartesianVelocity:
      cmd.target = CartesianVelocityTarget{sp.pose ? sp.pose->twist : Twist{}};
      break;
    case CommandInterface::Torque:
      throw std::logic_error("torque mode handled separately");
  }
  return cmd;
}

}  // namespace skillstack::skill
