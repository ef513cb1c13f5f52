// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "skillstack/types.hpp"

namespace skillstack {

// Raised for any malformed configuration file. The message names the file
// and the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, std::string key, const std::string& what);
  const std::string& source() const { return source_; }
  const std::string& key() const { return key_; }

 private:
  std::string source_;
  std::string key_;
};

// One modified (Craig) Denavit-Hartenberg row:
// Rot_x(alpha) * Trans_x(a) * Rot_z(q + theta_offset) * Trans_z(d).
struct DhRow {
  double a = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  double theta_offset = 0.0;
};

// Gains of the emulated internal robot controllers.
struct InternalControllerGains {
  JointVector joint_stiffness = JointVector::Constant(600.0);
  Vector6 cartesian_stiffness = (Vector6() << 2000, 2000, 2000, 150, 150, 150).finished();
  Vector6 cartesian_damping = (Vector6() << 90, 90, 90, 12, 12, 12).finished();
  double nullspace_damping = 2.0;
};

// Kinematic and simple dynamic description of a 7-DOF serial arm.
// Immutable after loading; share by const reference.
struct ArmModel {
  std::array<DhRow, kNumJoints> dh{};
  Pose ee_offset;
  JointVector q_min = JointVector::Constant(-M_PI);
  JointVector q_max = JointVector::Constant(M_PI);
  JointVector dq_max = JointVector::Constant(2.0);
  JointVector tau_max = JointVector::Constant(87.0);
  JointVector inertia = JointVector::Constant(0.5);
  JointVector viscous_friction = JointVector::Constant(0.5);

  JointVector q_initial = JointVector::Zero();
  double ee_linear_speed_max = 1.7;
  double ee_angular_speed_max = 2.5;
  InternalControllerGains internal;

  // Critically damped joint damping for the given stiffness: 2 * sqrt(kp * I).
  JointVector critical_damping(const JointVector& stiffness) const;

  // Throws ConfigError naming the first violated invariant.
  void validate(std::string_view source = "<model>") const;
};

ArmModel parse_arm_model(std::string_view toml_text, std::string_view source_name = "<string>");
ArmModel load_arm_model(const std::filesystem::path& path);

// Path of the arm file shipped with the project.
std::filesystem::path default_arm_config_path();

}  // namespace skillstack
