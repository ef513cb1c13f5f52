// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skillstack/arm_model.hpp"

namespace skillstack::safety {

// Axis-aligned box in the base frame.
struct Box {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half_extents = Eigen::Vector3d::Constant(0.05);
  bool valid() const { return center.allFinite() && half_extents.allFinite() && (half_extents.array() > 0).all(); }
  bool operator==(const Box&) const = default;
};

struct SafetyConfig {
  bool enabled = true;
  std::vector<Box> walls;
  std::optional<Box> workspace;
  Eigen::Vector3d ee_half_extents = Eigen::Vector3d::Constant(0.05);
  bool operator==(const SafetyConfig&) const = default;
};

// Empty when the configuration is usable.
std::optional<std::string> config_error(const SafetyConfig& cfg);

// Closed overlap: boxes that merely touch intersect.
bool boxes_intersect(const Box& a, const Box& b);

// True when `inner` lies entirely within `outer` (faces may coincide).
bool box_contains(const Box& outer, const Box& inner);

enum class ViolationKind { Wall, Workspace, JointLimit };

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::optional<Violation> check_safety(const SafetyConfig& cfg, const Pose& ee_pose, const JointVector& q,
                                      const ArmModel& model);

// Parses a `safety` table body (as found under a [[robots]] entry or on its own).
SafetyConfig parse_safety_config(std::string_view toml_text, std::string_view source_name = "<string>");

}  // namespace skillstack::safety
