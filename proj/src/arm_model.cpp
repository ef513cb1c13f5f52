// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/arm_model.hpp"

#include <cmath>
#include <sstream>

#include "toml_util.hpp"

namespace skillstack {

ConfigError::ConfigError(std::string source, std::string key, const std::string& what)
    : std::runtime_error(source + ": " + (key.empty() ? std::string() : "key '" + key + "': ") + what),
      source_(std::move(source)),
      key_(std::move(key)) {}

JointVector ArmModel::critical_damping(const JointVector& stiffness) const {
  return 2.0 * (stiffness.cwiseProduct(inertia)).cwiseSqrt();
}

void ArmModel::validate(std::string_view source) const {
  const std::string src(source);
  auto require_positive = [&](const JointVector& v, const char* key) {
    for (int i = 0; i < kNumJoints; ++i) {
      if (!std::isfinite(v[i]) || v[i] <= 0.0) {
        throw ConfigError(src, key, "entry " + std::to_string(i) + " must be positive and finite");
      }
    }
  };
  for (int i = 0; i < kNumJoints; ++i) {
    const DhRow& r = dh[static_cast<std::size_t>(i)];
    if (!std::isfinite(r.a) || !std::isfinite(r.d) || !std::isfinite(r.alpha) || !std::isfinite(r.theta_offset)) {
      throw ConfigError(src, "arm.dh", "row " + std::to_string(i) + " is not finite");
    }
    if (!std::isfinite(q_min[i]) || !std::isfinite(q_max[i]) || !(q_min[i] < q_max[i])) {
      throw ConfigError(src, "arm.q_min", "joint " + std::to_string(i) + " requires q_min < q_max");
    }
  }
  require_positive(dq_max, "arm.dq_max");
  require_positive(tau_max, "arm.tau_max");
  require_positive(inertia, "arm.inertia");
  require_positive(viscous_friction, "arm.viscous_friction");
  require_positive(internal.joint_stiffness, "arm.internal_controller.joint_stiffness");
  if (!all_finite(ee_offset)) {
    throw ConfigError(src, "ee_offset", "must be finite");
  }
  if (!q_initial.allFinite()) {
    throw ConfigError(src, "arm.q_initial", "must be finite");
  }
  for (int i = 0; i < kNumJoints; ++i) {
    if (q_initial[i] < q_min[i] || q_initial[i] > q_max[i]) {
      throw ConfigError(src, "arm.q_initial", "joint " + std::to_string(i) + " outside position limits");
    }
  }
  if (!(ee_linear_speed_max > 0.0) || !(ee_angular_speed_max > 0.0)) {
    throw ConfigError(src, "arm.ee_linear_speed_max", "end-effector speed limits must be positive");
  }
  if ((internal.cartesian_stiffness.array() < 0.0).any() || (internal.cartesian_damping.array() < 0.0).any() ||
      !(internal.nullspace_damping >= 0.0)) {
    throw ConfigError(src, "arm.internal_controller", "gains must be non-negative");
  }
}

ArmModel parse_arm_model(std::string_view toml_text, std::string_view source_name) {
  const std::string src(source_name);
  toml::table root = detail::parse_toml(toml_text, src);
  detail::TomlReader arm(root, "arm", src);

  ArmModel m;
  const auto a = arm.fixed<kNumJoints>("dh_a");
  const auto d = arm.fixed<kNumJoints>("dh_d");
  const auto alpha = arm.fixed<kNumJoints>("dh_alpha");
  const auto theta = arm.fixed<kNumJoints>("dh_theta_offset");
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    m.dh[i] = DhRow{a[i], d[i], alpha[i], theta[i]};
  }
  m.q_min = arm.joint_vector("q_min");
  m.q_max = arm.joint_vector("q_max");
  m.dq_max = arm.joint_vector("dq_max");
  m.tau_max = arm.joint_vector("tau_max");
  m.inertia = arm.joint_vector("inertia");
  m.viscous_friction = arm.joint_vector("viscous_friction");

  m.q_initial = arm.has("q_initial") ? arm.joint_vector("q_initial") : 0.5 * (m.q_min + m.q_max);
  m.ee_linear_speed_max = arm.number_or("ee_linear_speed_max", m.ee_linear_speed_max);
  m.ee_angular_speed_max = arm.number_or("ee_angular_speed_max", m.ee_angular_speed_max);
  if (arm.boolean_or("gravity", false)) {
    throw ConfigError(src, "arm.gravity", "gravity modeling is reserved and not supported");
  }

  if (arm.has("internal_controller")) {
    detail::TomlReader ic = arm.table("internal_controller");
    if (ic.has("joint_stiffness")) m.internal.joint_stiffness = ic.joint_vector("joint_stiffness");
    if (ic.has("cartesian_stiffness")) m.internal.cartesian_stiffness = ic.vector6("cartesian_stiffness");
    if (ic.has("cartesian_damping")) m.internal.cartesian_damping = ic.vector6("cartesian_damping");
    m.internal.nullspace_damping = ic.number_or("nullspace_damping", m.internal.nullspace_damping);
  }

  detail::TomlReader ee(root, "ee_offset", src);
  const auto p = ee.fixed<3>("position");
  const auto qw = ee.fixed<4>("quaternion_wxyz");
  try {
    m.ee_offset = Pose::from_wxyz(Eigen::Vector3d(p[0], p[1], p[2]), qw[0], qw[1], qw[2], qw[3]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(src, "ee_offset.quaternion_wxyz", e.what());
  }

  m.validate(src);
  return m;
}

ArmModel load_arm_model(const std::filesystem::path& path) {
  return parse_arm_model(detail::read_text_file(path), path.string());
}

std::filesystem::path default_arm_config_path() {
  if (const char* env = std::getenv("SKILLSTACK_ARM_CONFIG")) {
    return env;
  }
  return SKILLSTACK_DEFAULT_ARM_CONFIG;
}

}  // namespace skillstack
