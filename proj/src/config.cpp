// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/server_config.hpp"

#include <cstdlib>
#include <set>

#include "safety_toml.hpp"
#include "toml_util.hpp"

namespace skillstack::server {

std::uint32_t cap_state_rate(std::uint32_t hz) {
  if (hz == 0) return 0;
  hz = std::min(hz, kMaxStateRate);
  while (kMaxStateRate % hz != 0) --hz;
  return hz;
}

ServerConfig parse_server_config(std::string_view toml_text, std::string_view source_name,
                                 const std::filesystem::path& base_dir) {
  const std::string source(source_name);
  const toml::table root = detail::parse_toml(toml_text, source);
  const detail::TomlReader top(&root, "", source);
  auto resolve = [&](const std::filesystem::path& p) { return p.is_relative() ? base_dir / p : p; };

  ServerConfig cfg;
  if (top.has("server")) {
    const detail::TomlReader s = top.table("server");
    cfg.address = s.string_or("address", cfg.address);
    const long long port = s.integer_or("port", cfg.port);
    if (port < 0 || port > 65535) s.fail("port", "must be in [0, 65535]");
    cfg.port = static_cast<std::uint16_t>(port);
    const std::string clock = s.string_or("clock", "real");
    if (clock == "real") {
      cfg.clock = core::ClockMode::Real;
    } else if (clock == "sim") {
      cfg.clock = core::ClockMode::Sim;
    } else {
      s.fail("clock", "expected \"real\" or \"sim\"");
    }
    const long long rate = s.integer_or("state_rate_hz", kDefaultStateRate);
    if (rate <= 0) s.fail("state_rate_hz", "must be positive");
    cfg.state_rate_hz = cap_state_rate(static_cast<std::uint32_t>(std::min<long long>(rate, kMaxStateRate)));
    cfg.log_dir = resolve(s.string_or("log_dir", cfg.log_dir.string()));
  } else {
    cfg.log_dir = resolve(cfg.log_dir);
  }

  std::set<long long> ids;
  for (const detail::TomlReader& r : top.tables("robots")) {
    RobotConfig rc;
    const long long id = r.integer("id");
    if (id < 0 || id > 65535) r.fail("id", "must be in [0, 65535]");
    if (!ids.insert(id).second) r.fail("id", "duplicate robot id " + std::to_string(id));
    rc.id = static_cast<std::uint16_t>(id);
    rc.arm_config = r.has("arm_config") ? resolve(r.string("arm_config")) : default_arm_config_path();
    if (r.has("safety")) rc.safety = detail::read_safety(r.table("safety"));
    cfg.robots.push_back(std::move(rc));
  }
  if (cfg.robots.empty()) throw ConfigError(source, "robots", "at least one [[robots]] entry is required");
  return cfg;
}

ServerConfig load_server_config(const std::filesystem::path& path) {
  return parse_server_config(detail::read_text_file(path), path.string(), path.parent_path());
}

std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::filesystem::path>& requested) {
  if (const char* env = std::getenv("SKILLSTACK_CONFIG"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return requested;
}

}  // namespace skillstack::server
