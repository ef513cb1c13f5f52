// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/skillstack.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "skillstack/bench.hpp"
#include "skillstack/log_format.hpp"
#include "skillstack/net/client.hpp"
#include "skillstack/net/server.hpp"
#include "skillstack/server_config.hpp"

using namespace skillstack;

struct skst_server {
  std::unique_ptr<server::Server> impl;
};

struct skst_log {
  log::LogFile file;
};

struct skst_client {
  std::unique_ptr<client::Client> impl;
};

namespace {

thread_local std::string g_last_error;

skst_status fail(skst_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Maps exceptions escaping the C++ layer onto status codes.
template <typename Fn>
skst_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const ConfigError& e) {
    return fail(SKST_ERR_CONFIG, e.what());
  } catch (const net::NetError& e) {
    return fail(SKST_ERR_NET, e.what());
  } catch (const log::LogFormatError& e) {
    const bool magic = std::strstr(e.what(), "magic") != nullptr;
    return fail(magic ? SKST_ERR_BAD_MAGIC : SKST_ERR_FORMAT, e.what());
  } catch (const client::ServerError& e) {
    return fail(e.code() == wire::ErrorCode::UnknownRobot ? SKST_ERR_UNKNOWN_ROBOT : SKST_ERR_SERVER, e.what());
  } catch (const core::NotStarted& e) {
    return fail(SKST_ERR_NOT_STARTED, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SKST_ERR_IO, e.what());
  } catch (const std::system_error& e) {
    return fail(SKST_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SKST_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(SKST_ERR_INTERNAL, e.what());
  }
}

std::optional<server::ServerConfig> config_from(const char* path) {
  auto resolved = server::resolve_config_path(path ? std::optional<std::filesystem::path>(path) : std::nullopt);
  if (!resolved) return std::nullopt;
  return server::load_server_config(*resolved);
}

bool parse_clock(const char* clock, core::ClockMode& out) {
  if (clock == nullptr) return true;
  if (std::strcmp(clock, "real") == 0) {
    out = core::ClockMode::Real;
  } else if (std::strcmp(clock, "sim") == 0) {
    out = core::ClockMode::Sim;
  } else {
    return false;
  }
  return true;
}

void copy_out(const std::string& s, char* buf, std::size_t len) {
  if (buf == nullptr || len == 0) return;
  const std::size_t n = std::min(len - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
}

}  // namespace

extern "C" {

const char* skst_last_error(void) { return g_last_error.c_str(); }

const char* skst_version(void) { return "0.1.0"; }

skst_status skst_validate_config(const char* path, char* summary, size_t summary_len) {
  if (path == nullptr) return fail(SKST_ERR_INVALID_ARGUMENT, "path is NULL");
  return guarded([&] {
    const std::string text = [&] {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw ConfigError(path, "", "cannot open file");
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }();
    // An arm file has an [arm] table; anything else is read as a server config.
    if (text.find("[arm]") != std::string::npos && text.find("[[robots]]") == std::string::npos) {
      const ArmModel m = load_arm_model(path);
      (void)m;
      copy_out(std::string("arm config ok: ") + path, summary, summary_len);
      return SKST_OK;
    }
    const server::ServerConfig cfg = server::load_server_config(path);
    for (const server::RobotConfig& r : cfg.robots) (void)load_arm_model(r.arm_config);
    copy_out("server config ok: " + std::to_string(cfg.robots.size()) + " robot(s), clock " +
                 std::string(core::to_string(cfg.clock)) + ", port " + std::to_string(cfg.port) + ", state rate " +
                 std::to_string(cfg.state_rate_hz) + " Hz",
             summary, summary_len);
    return SKST_OK;
  });
}

skst_status skst_server_create(const char* config_path, const char* clock, int port, skst_server** out) {
  if (out == nullptr) return fail(SKST_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] {
    std::optional<server::ServerConfig> cfg = config_from(config_path);
    if (!cfg) return fail(SKST_ERR_INVALID_ARGUMENT, "no config path given and SKILLSTACK_CONFIG is unset");
    if (!parse_clock(clock, cfg->clock)) return fail(SKST_ERR_INVALID_ARGUMENT, "clock must be real or sim");
    if (port > 65535) return fail(SKST_ERR_INVALID_ARGUMENT, "port out of range");
    if (port >= 0) cfg->port = static_cast<std::uint16_t>(port);
    auto s = std::make_unique<skst_server>();
    s->impl = std::make_unique<server::Server>(std::move(*cfg));
    *out = s.release();
    return SKST_OK;
  });
}

skst_status skst_server_start(skst_server* server) {
  if (server == nullptr) return fail(SKST_ERR_INVALID_ARGUMENT, "server is NULL");
  return guarded([&] {
    server->impl->start();
    return SKST_OK;
  });
}

int skst_server_port(const skst_server* server) { return server ? server->impl->port() : -1; }

skst_status skst_server_stop(skst_server* server) {
  if (server == nullptr) return fail(SKST_ERR_INVALID_ARGUMENT, "server is NULL");
  return guarded([&] {
    server->impl->stop();
    return SKST_OK;
  });
}

void skst_server_destroy(skst_server* server) { delete server; }

skst_status skst_bench_loop(const char* config_path, const char* clock, double duration_s, const char* load,
                            skst_bench_report* out) {
  if (out == nullptr) return fail(SKST_ERR_INVALID_ARGUMENT, "out is NULL");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) return fail(SKST_ERR_INVALID_ARGUMENT, "duration must be > 0");
  bench::BenchLoad kind = bench::BenchLoad::Hold;
  if (load != nullptr && std::strcmp(load, "impedance") == 0) {
    kind = bench::BenchLoad::Impedance;
  } else if (load != nullptr && std::strcmp(load, "hold") != 0) {
    return fail(SKST_ERR_INVALID_ARGUMENT, "load must be hold or impedance");
  }
  return guarded([&] {
    core::ClockMode mode = core::ClockMode::Real;
    std::filesystem::path arm = default_arm_config_path();
    if (std::optional<server::ServerConfig> cfg = config_from(config_path)) {
      mode = cfg->clock;
      arm = cfg->robots.front().arm_config;
    }
    if (!parse_clock(clock, mode)) return fail(SKST_ERR_INVALID_ARGUMENT, "clock must be real or sim");
    if (mode != core::ClockMode::Real) return fail(SKST_ERR_REQUIRES_REAL_CLOCK, "bench requires real clock");
    auto model = std::make_shared<const ArmModel>(load_arm_model(arm));
    const bench::BenchReport r = bench::run_loop_bench(model, duration_s, kind);
    *out = skst_bench_report{r.ticks, r.mean_us, r.median_us, r.p99_us, r.max_us, r.missed};
    return SKST_OK;
  });
}

size_t skst_bench_format(const skst_bench_report* report, char* buf, size_t len) {
  if (report == nullptr) return 0;
  const std::string s = bench::format_report(bench::BenchReport{report->ticks, report->mean_us, report->median_us,
                                                                report->p99_us, report->max_us, report->missed});
  copy_out(s, buf, len);
  return s.size();
}

skst_status skst_log_open(const char* path, skst_log** out) {
  if (path == nullptr || out == nullptr) return fail(SKST_ERR_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    if (!std::filesystem::exists(path)) return fail(SKST_ERR_IO, std::string("no such file: ") + path);
    auto l = std::make_unique<skst_log>();
    l->file = log::read_log(path);
    *out = l.release();
    return SKST_OK;
  });
}

uint64_t skst_log_record_count(const skst_log* l) { return l ? l->file.records.size() : 0; }

uint16_t skst_log_robot_id(const skst_log* l) { return l ? l->file.robot_id : 0; }

uint64_t skst_log_trailing_bytes(const skst_log* l) { return l ? l->file.trailing_bytes : 0; }

skst_status skst_log_record(const skst_log* l, uint64_t index, skst_record* out) {
  if (l == nullptr || out == nullptr) return fail(SKST_ERR_INVALID_ARGUMENT, "NULL argument");
  if (index >= l->file.records.size()) return fail(SKST_ERR_INVALID_ARGUMENT, "record index out of range");
  const RobotState& s = l->file.records[index];
  skst_record r{};
  r.tick = s.tick;
  r.wall_ns = s.wall_ns;
  for (int i = 0; i < kNumJoints; ++i) {
    r.q[i] = s.q[i];
    r.dq[i] = s.dq[i];
    r.tau_commanded[i] = s.tau_commanded[i];
    r.tau_external[i] = s.tau_external[i];
  }
  for (int i = 0; i < 3; ++i) r.position[i] = s.ee_pose.position()[i];
  const Eigen::Quaterniond& q = s.ee_pose.orientation();
  r.quaternion_wxyz[0] = q.w();
  r.quaternion_wxyz[1] = q.x();
  r.quaternion_wxyz[2] = q.y();
  r.quaternion_wxyz[3] = q.z();
  const Vector6 w = s.ee_wrench_external.as_vector();
  for (int i = 0; i < 6; ++i) r.wrench[i] = w[i];
  r.gripper_width = s.gripper_width;
  r.gripper_moving = s.gripper_moving ? 1 : 0;
  r.skill_id = s.active_skill_id.value_or(0);
  r.phase = static_cast<uint8_t>(s.skill_phase);
  *out = r;
  return SKST_OK;
}

void skst_log_close(skst_log* l) { delete l; }

skst_status skst_client_connect(const char* host, uint16_t port, skst_client** out) {
  if (host == nullptr || out == nullptr) return fail(SKST_ERR_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    auto c = std::make_unique<skst_client>();
    c->impl = std::make_unique<client::Client>(host, port);
    *out = c.release();
    return SKST_OK;
  });
}

skst_status skst_client_inject_wrench(skst_client* c, uint16_t robot_id, const double wrench[6], double duration_s) {
  if (c == nullptr || wrench == nullptr) return fail(SKST_ERR_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    Vector6 w;
    for (int i = 0; i < 6; ++i) w[i] = wrench[i];
    c->impl->inject_wrench(robot_id, Wrench::from_vector(w), duration_s);
    return SKST_OK;
  });
}

void skst_client_close(skst_client* c) { delete c; }

}  // extern "C"
