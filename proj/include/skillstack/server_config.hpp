// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "skillstack/robot_core.hpp"
#include "skillstack/safety.hpp"

namespace skillstack::server {

constexpr std::uint32_t kDefaultStateRate = 100;
constexpr std::uint32_t kMaxStateRate = 1000;

struct RobotConfig {
  std::uint16_t id = 0;
  std::filesystem::path arm_config;
  safety::SafetyConfig safety;
};

struct ServerConfig {
  std::string address = "127.0.0.1";
  std::uint16_t port = 7878;
  core::ClockMode clock = core::ClockMode::Real;
  std::uint32_t state_rate_hz = kDefaultStateRate;
  std::filesystem::path log_dir = "logs";
  std::vector<RobotConfig> robots;
};

// Relative paths (arm_config, log_dir) resolve against `base_dir`.
ServerConfig parse_server_config(std::string_view toml_text, std::string_view source_name,
                                 const std::filesystem::path& base_dir = {});
ServerConfig load_server_config(const std::filesystem::path& path);

// SKILLSTACK_CONFIG, when set, replaces `requested`.
std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::filesystem::path>& requested);

// Largest divisor of 1000 not above `hz` (capped at 1000); 0 stays 0.
std::uint32_t cap_state_rate(std::uint32_t hz);

}  // namespace skillstack::server
