// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "skillstack/arm_model.hpp"
#include "skillstack/kinematics.hpp"
#include "skillstack/robot_state.hpp"

namespace skillstack {

// Command interface x internal controller combinations accepted by the arm.
enum class ControlMode : std::uint8_t {
  JointPositionJointImpedance = 0,
  JointPositionCartesianImpedance = 1,
  JointVelocityJointImpedance = 2,
  JointVelocityCartesianImpedance = 3,
  CartesianPoseJointImpedance = 4,
  CartesianPoseCartesianImpedance = 5,
  CartesianVelocityJointImpedance = 6,
  CartesianVelocityCartesianImpedance = 7,
  ExternalTorque = 8,
};

inline constexpr std::array<ControlMode, 9> kAllControlModes = {
    ControlMode::JointPositionJointImpedance,     ControlMode::JointPositionCartesianImpedance,
    ControlMode::JointVelocityJointImpedance,     ControlMode::JointVelocityCartesianImpedance,
    ControlMode::CartesianPoseJointImpedance,     ControlMode::CartesianPoseCartesianImpedance,
    ControlMode::CartesianVelocityJointImpedance, ControlMode::CartesianVelocityCartesianImpedance,
    ControlMode::ExternalTorque,
};

enum class CommandInterface { JointPosition, JointVelocity, CartesianPose, CartesianVelocity, Torque };
enum class InternalImpedance { Joint, Cartesian, None };

CommandInterface command_interface(ControlMode mode);
InternalImpedance internal_impedance(ControlMode mode);
ControlMode make_control_mode(CommandInterface iface, InternalImpedance internal);
std::string_view to_string(ControlMode mode);

struct JointPositionTarget {
  JointVector q;
  JointVector dq = JointVector::Zero();
};
struct JointVelocityTarget {
  JointVector dq;
};
struct CartesianPoseTarget {
  Pose pose;
  Twist twist;
};
struct CartesianVelocityTarget {
  Twist twist;
};
struct TorqueTarget {
  JointVector tau;
};

using CommandTarget =
    std::variant<JointPositionTarget, JointVelocityTarget, CartesianPoseTarget, CartesianVelocityTarget, TorqueTarget>;

struct RobotCommand {
  ControlMode mode = ControlMode::JointPositionJointImpedance;
  CommandTarget target = JointPositionTarget{JointVector::Zero()};
  // Overrides for the internal joint impedance; model defaults when empty.
  std::optional<JointVector> joint_stiffness;
  std::optional<JointVector> joint_damping;

  // Target variant matches mode.
  bool valid() const;
  bool finite() const;

  static RobotCommand hold(const JointVector& q);
};

constexpr double kGripperMaxWidth = 0.08;
constexpr double kGripperArrivalTolerance = 1e-4;

struct GripperCommand {
  double target_width = kGripperMaxWidth;
  double speed = 0.05;
  double grasp_force = 0.0;

  bool operator==(const GripperCommand&) const = default;
};

// Empty when the command is within bounds, otherwise a description.
std::optional<std::string> gripper_command_error(const GripperCommand& cmd);

struct GripperState {
  double width = kGripperMaxWidth;
  bool moving = false;
};

// Moves the width toward the target at cmd.speed, saturating at the target.
GripperState gripper_step(const GripperState& g, const GripperCommand& cmd, double dt);

struct StepResult {
  LimitFlags limits;
  bool rejected_command = false;
  // Joint-space reference the internal controller tracked this step.
  JointVector reference_q = JointVector::Zero();
};

// Deterministic simulated arm with decoupled per-joint second-order dynamics
// and viscous friction, plus a 1-DOF gripper.
// 
// The referenced ArmModel must outlive the robot. Copies are cheap and fully
// independent, which the control loop uses to preview a step.
class SimRobot {
 public:
  explicit SimRobot(const ArmModel& model);
  SimRobot(const ArmModel& model, const JointVector& q0);

  const RobotState& state() const { return state_; }
  const ArmModel& model() const { return *model_; }
  const GripperState& gripper() const { return gripper_; }

  // Advances one control period. A command that is non-finite or whose
  // target does not match its mode is replaced by a position hold and
  // reported through StepResult::rejected_command.
  StepResult step(const RobotCommand& cmd, const Wrench& injected, double dt = kControlPeriod);

  // Throws std::invalid_argument when the command is out of bounds.
  void command_gripper(const GripperCommand& cmd);

  // Re-anchors velocity-mode integrators on the live state.
  void reset_internal_reference();

  void set_wall_ns(std::uint64_t ns) { state_.wall_ns = ns; }
  void set_skill_info(std::optional<std::uint32_t> id, SkillPhase phase) {
    state_.active_skill_id = id;
    state_.skill_phase = phase;
  }

 private:
  JointVector internal_torque(const RobotCommand& cmd, const Jacobian& j, double dt, JointVector& reference_q);
  JointVector joint_target_torque(const RobotCommand& cmd, const JointVector& q_d, const JointVector& dq_d,
                                  const Jacobian& j, JointVector& reference_q) const;
  JointVector pose_target_torque(const RobotCommand& cmd, const Pose& pose_d, const Twist& twist_d,
                                 const Jacobian& j, JointVector& reference_q) const;
  JointVector cartesian_torque(const Pose& pose_d, const Twist& twist_d, const Jacobian& j) const;

  const ArmModel* model_;
  RobotState state_;
  GripperState gripper_;
  GripperCommand gripper_cmd_;
  std::optional<ControlMode> last_mode_;
  JointVector q_ref_ = JointVector::Zero();
  Pose pose_ref_;
};

}  // namespace skillstack
