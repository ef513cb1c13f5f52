// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/safety.hpp"

#include <sstream>

#include "safety_toml.hpp"

namespace skillstack::safety {

std::optional<std::string> config_error(const SafetyConfig& cfg) {
  if (!cfg.ee_half_extents.allFinite() || (cfg.ee_half_extents.array() <= 0).any()) {
    return "ee_half_extents must be positive";
  }
  for (std::size_t i = 0; i < cfg.walls.size(); ++i) {
    if (!cfg.walls[i].valid()) return "wall " + std::to_string(i) + " has non-positive half extents";
  }
  if (cfg.workspace && !cfg.workspace->valid()) return "workspace has non-positive half extents";
  return std::nullopt;
}

bool boxes_intersect(const Box& a, const Box& b) {
  return ((a.center - b.center).cwiseAbs().array() <= (a.half_extents + b.half_extents).array()).all();
}

bool box_contains(const Box& outer, const Box& inner) {
  return ((inner.center - outer.center).cwiseAbs().array() <= (outer.half_extents - inner.half_extents).array())
      .all();
}

std::optional<Violation> check_safety(const SafetyConfig& cfg, const Pose& ee_pose, const JointVector& q,
                                      const ArmModel& model) {
  if (!cfg.enabled) return std::nullopt;
  const Box ee{ee_pose.position(), cfg.ee_half_extents};
  for (std::size_t i = 0; i < cfg.walls.size(); ++i) {
    if (boxes_intersect(ee, cfg.walls[i])) {
      return Violation{ViolationKind::Wall, "end-effector box touches wall " + std::to_string(i)};
    }
  }
  if (cfg.workspace && !box_contains(*cfg.workspace, ee)) {
    return Violation{ViolationKind::Workspace, "end-effector box leaves the workspace"};
  }
  for (int i = 0; i < kNumJoints; ++i) {
    if (q[i] < model.q_min[i] || q[i] > model.q_max[i]) {
      std::ostringstream os;
      os << "joint " << i + 1 << " at " << q[i] << " outside [" << model.q_min[i] << ", " << model.q_max[i] << "]";
      return Violation{ViolationKind::JointLimit, os.str()};
    }
  }
  return std::nullopt;
}

SafetyConfig parse_safety_config(std::string_view toml_text, std::string_view source_name) {
  const std::string source(source_name);
  const toml::table root = detail::parse_toml(toml_text, source);
  const detail::TomlReader reader(&root, "", source);
  return detail::read_safety(reader.has("safety") ? reader.table("safety") : reader);
}

}  // namespace skillstack::safety

namespace skillstack::detail {

namespace {

safety::Box read_box(const TomlReader& t) {
  safety::Box b{t.vector3("center"), t.vector3("half_extents")};
  if (!b.valid()) t.fail("half_extents", "must be positive and finite");
  return b;
}

}  // namespace

safety::SafetyConfig read_safety(const TomlReader& t) {
  safety::SafetyConfig cfg;
  cfg.enabled = t.boolean_or("enabled", true);
  if (t.has("ee_half_extents")) cfg.ee_half_extents = t.vector3("ee_half_extents");
  if (!cfg.ee_half_extents.allFinite() || (cfg.ee_half_extents.array() <= 0).any()) {
    t.fail("ee_half_extents", "must be positive and finite");
  }
  if (t.has("workspace")) cfg.workspace = read_box(t.table("workspace"));
  for (const TomlReader& w : t.tables("walls")) cfg.walls.push_back(read_box(w));
  return cfg;
}

}  // namespace skillstack::detail
