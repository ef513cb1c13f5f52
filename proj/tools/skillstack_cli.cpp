// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skillstack/skillstack.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int report(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, skst_last_error());
  return kExitFailure;
}

const char* opt_cstr(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

int run_serve(const std::string& config, const std::string& clock, int port) {
  // Block before any server thread exists so only sigwait sees the signals.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  skst_server* server = nullptr;
  if (skst_server_create(opt_cstr(config), opt_cstr(clock), port, &server) != SKST_OK) return report("serve");
  if (skst_server_start(server) != SKST_OK) {
    const int rc = report("serve");
    skst_server_destroy(server);
    return rc;
  }
  std::printf("ready port=%d\n", skst_server_port(server));
  std::fflush(stdout);

  int sig = 0;
  sigwait(&set, &sig);
  std::fprintf(stderr, "received %s, shutting down\n", sig == SIGINT ? "SIGINT" : "SIGTERM");
  const skst_status st = skst_server_stop(server);
  int rc = kExitOk;
  if (st != SKST_OK) rc = report("shutdown");
  skst_server_destroy(server);
  return rc;
}

int run_bench(const std::string& config, const std::string& clock, double duration, const std::string& load) {
  skst_bench_report r{};
  const skst_status st = skst_bench_loop(opt_cstr(config), opt_cstr(clock), duration, load.c_str(), &r);
  if (st == SKST_ERR_REQUIRES_REAL_CLOCK) {
    std::fprintf(stderr, "error: %s\n", skst_last_error());
    return kExitUsage;
  }
  if (st != SKST_OK) return report("bench");
  std::string text(skst_bench_format(&r, nullptr, 0) + 1, '\0');
  skst_bench_format(&r, text.data(), text.size());
  text.pop_back();
  std::fputs(text.c_str(), stdout);
  if (text.empty() || text.back() != '\n') std::fputc('\n', stdout);
  return kExitOk;
}

// %.17g is enough for every f64 to read back bit-exactly.
void put_f64(double v) { std::printf(",%.17g", v); }

void put_array(const double* v, int n) {
  for (int i = 0; i < n; ++i) put_f64(v[i]);
}

void csv_header() {
  std::string h = "tick,wall_ns";
  const char* groups[] = {"q", "dq", "tau_cmd", "tau_ext"};
  for (const char* g : groups) {
    for (int i = 0; i < 7; ++i) h += "," + std::string(g) + std::to_string(i);
  }
  h += ",px,py,pz,qw,qx,qy,qz,fx,fy,fz,tx,ty,tz,gripper_width,gripper_moving,skill_id,phase";
  std::puts(h.c_str());
}

void csv_row(const skst_record& r) {
  std::printf("%llu,%llu", static_cast<unsigned long long>(r.tick), static_cast<unsigned long long>(r.wall_ns));
  put_array(r.q, 7);
  put_array(r.dq, 7);
  put_array(r.tau_commanded, 7);
  put_array(r.tau_external, 7);
  put_array(r.position, 3);
  put_array(r.quaternion_wxyz, 4);
  put_array(r.wrench, 6);
  put_f64(r.gripper_width);
  std::printf(",%u,%u,%u\n", r.gripper_moving, r.skill_id, r.phase);
}

void text_vec(const char* name, const double* v, int n) {
  std::printf("  %-8s", name);
  for (int i = 0; i < n; ++i) std::printf(" %.17g", v[i]);
  std::putchar('\n');
}

const char* phase_name(std::uint8_t p) {
  switch (p) {
    case 0: return "idle";
    case 1: return "running";
    case 2: return "finishing";
    case 3: return "aborted";
    default: return "?";
  }
}

void text_record(const skst_record& r) {
  std::printf("tick %llu wall_ns %llu skill %u phase %s\n", static_cast<unsigned long long>(r.tick),
              static_cast<unsigned long long>(r.wall_ns), r.skill_id, phase_name(r.phase));
  text_vec("q", r.q, 7);
  text_vec("dq", r.dq, 7);
  text_vec("tau_cmd", r.tau_commanded, 7);
  text_vec("tau_ext", r.tau_external, 7);
  text_vec("pos", r.position, 3);
  text_vec("quat", r.quaternion_wxyz, 4);
  text_vec("wrench", r.wrench, 6);
  std::printf("  gripper  %.17g%s\n", r.gripper_width, r.gripper_moving ? " (moving)" : "");
}

int run_logdump(const std::string& path, bool csv) {
  skst_log* log = nullptr;
  if (skst_log_open(path.c_str(), &log) != SKST_OK) return report("logdump");
  const std::uint64_t n = skst_log_record_count(log);
  if (csv) {
    csv_header();
  } else {
    std::printf("robot %u, %llu records\n", skst_log_robot_id(log), static_cast<unsigned long long>(n));
  }
  skst_record r{};
  for (std::uint64_t i = 0; i < n; ++i) {
    if (skst_log_record(log, i, &r) != SKST_OK) {
      skst_log_close(log);
      return report("logdump");
    }
    csv ? csv_row(r) : text_record(r);
  }
  if (const std::uint64_t extra = skst_log_trailing_bytes(log); extra != 0) {
    std::fprintf(stderr, "warning: truncated file, salvaged %llu records (%llu trailing bytes ignored)\n",
                 static_cast<unsigned long long>(n), static_cast<unsigned long long>(extra));
  }
  skst_log_close(log);
  return kExitOk;
}

bool split_addr(const std::string& addr, std::string& host, std::uint16_t& port) {
  const auto colon = addr.rfind(':');
  host = colon == std::string::npos ? addr : addr.substr(0, colon);
  if (host.empty()) return false;
  if (colon == std::string::npos) return true;
  try {
    std::size_t used = 0;
    const long p = std::stol(addr.substr(colon + 1), &used);
    if (used != addr.size() - colon - 1 || p <= 0 || p > 65535) return false;
    port = static_cast<std::uint16_t>(p);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

int run_inject(const std::string& host, std::uint16_t port, std::uint16_t robot, const double wrench[6],
               double duration) {
  skst_client* client = nullptr;
  if (skst_client_connect(host.c_str(), port, &client) != SKST_OK) return report("inject-wrench");
  const skst_status st = skst_client_inject_wrench(client, robot, wrench, duration);
  skst_client_close(client);
  if (st != SKST_OK) return report("inject-wrench");
  std::printf("ack: ok (robot %u, %g s)\n", robot, duration);
  return kExitOk;
}

int run_validate(const std::string& path) {
  char summary[512];
  if (skst_validate_config(path.c_str(), summary, sizeof summary) != SKST_OK) return report("validate-config");
  std::puts(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skillstack robot control stack"};
  app.require_subcommand(1);

  std::string config;
  std::string clock;
  int port = -1;
  auto* serve = app.add_subcommand("serve", "Run the control server");
  serve->add_option("--config", config, "Server config (SKILLSTACK_CONFIG overrides)");
  serve->add_option("--clock", clock, "Clock mode")->check(CLI::IsMember({"real", "sim"}));
  serve->add_option("--port", port, "Listen port (0 = ephemeral)")->check(CLI::Range(0, 65535));

  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  auto* loop = bench->add_subcommand("loop", "Measure control loop tick timing");
  double duration = 0.0;
  std::string skill = "hold";
  loop->add_option("--duration", duration, "Seconds to run")->required();
  loop->add_option("--config", config, "Server config selecting the arm");
  loop->add_option("--clock", clock, "Clock mode")->check(CLI::IsMember({"real", "sim"}));
  loop->add_option("--skill", skill, "Load variant")->check(CLI::IsMember({"hold", "impedance"}));

  std::string path;
  bool csv = false;
  auto* logdump = app.add_subcommand("logdump", "Print a robot state log");
  logdump->add_option("path", path, "Log file")->required();
  logdump->add_flag("--csv", csv, "CSV output");

  int robot = 0;
  double w[6] = {0, 0, 0, 0, 0, 0};
  double inject_duration = 0.0;
  std::string addr = "127.0.0.1:7878";
  auto* inject = app.add_subcommand("inject-wrench", "Apply an external wrench to a simulated robot");
  inject->add_option("--robot", robot, "Robot id")->required()->check(CLI::Range(0, 65535));
  const char* names[] = {"--fx", "--fy", "--fz", "--tx", "--ty", "--tz"};
  for (int i = 0; i < 6; ++i) inject->add_option(names[i], w[i]);
  inject->add_option("--duration", inject_duration, "Seconds")->required();
  inject->add_option("--addr", addr, "host:port");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate-config", "Check a server or arm config");
  validate->add_option("path", validate_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*serve) return run_serve(config, clock, port);
  if (*loop) {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
      std::fprintf(stderr, "error: --duration must be positive\n");
      return kExitUsage;
    }
    return run_bench(config, clock, duration, skill);
  }
  if (*logdump) return run_logdump(path, csv);
  if (*inject) {
    if (!(inject_duration > 0.0) || !std::isfinite(inject_duration)) {
      std::fprintf(stderr, "error: --duration must be positive\n");
      return kExitUsage;
    }
    for (double v : w) {
      if (!std::isfinite(v)) {
        std::fprintf(stderr, "error: wrench components must be finite\n");
        return kExitUsage;
      }
    }
    std::string host;
    std::uint16_t p = 7878;
    if (!split_addr(addr, host, p)) {
      std::fprintf(stderr, "error: --addr must be host[:port]\n");
      return kExitUsage;
    }
    return run_inject(host, p, static_cast<std::uint16_t>(robot), w, inject_duration);
  }
  if (*validate) return run_validate(validate_path);
  return kExitUsage;
}
