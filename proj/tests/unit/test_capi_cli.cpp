// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include <gtest/gtest.h>

#include <signal.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "skillstack/log_format.hpp"
#include "skillstack/net/socket.hpp"
#include "skillstack/skillstack.h"
#include "test_support.hpp"

namespace skillstack {
namespace {

using testing::cli_path;
using testing::run_command;
using testing::TempDir;

std::string quoted(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// Sim-clock log of `ticks` records written through the public log buffer.
std::filesystem::path make_log(const TempDir& dir, std::uint64_t ticks, std::uint16_t robot = 2) {
  core::CommandMailbox mb;
  core::ControlLoop loop(testing::panda(), mb, core::LoopOptions{robot, {}, std::nullopt});
  Wrench w;
  w.force = Eigen::Vector3d(0.3, -0.7, 1.1);
  mb.post(core::InjectWrench{w, ticks});
  testing::run_until_quiescent(loop);
  const auto path = dir / "robot.filg";
  loop.log().flush(path);
  return path;
}

TEST(CApi, LastErrorAndVersion) {
  EXPECT_STRNE(skst_version(), "");
  skst_log* log = nullptr;
  EXPECT_EQ(skst_log_open("/definitely/missing.filg", &log), SKST_ERR_IO);
  EXPECT_NE(std::string(skst_last_error()).find("missing"), std::string::npos);
  EXPECT_EQ(skst_log_open(nullptr, &log), SKST_ERR_INVALID_ARGUMENT);
}

TEST(CApi, LogAccessMatchesReader) {
  TempDir dir;
  const auto path = make_log(dir, 50);
  skst_log* log = nullptr;
  ASSERT_EQ(skst_log_open(path.c_str(), &log), SKST_OK);
  EXPECT_EQ(skst_log_record_count(log), 50U);
  EXPECT_EQ(skst_log_robot_id(log), 2);
  const log::LogFile ref = log::read_log(path);
  skst_record r{};
  ASSERT_EQ(skst_log_record(log, 49, &r), SKST_OK);
  EXPECT_EQ(r.tick, 49U);
  for (int i = 0; i < 7; ++i) EXPECT_EQ(r.q[i], ref.records[49].q[i]);
  EXPECT_EQ(r.wrench[1], -0.7);
  EXPECT_EQ(skst_log_record(log, 50, &r), SKST_ERR_INVALID_ARGUMENT);
  skst_log_close(log);
}

TEST(CApi, BenchRejectsSimClock) {
  skst_bench_report rep{};
  EXPECT_EQ(skst_bench_loop(nullptr, "sim", 1.0, "hold", &rep), SKST_ERR_REQUIRES_REAL_CLOCK);
  EXPECT_STREQ(skst_last_error(), "bench requires real clock");
  EXPECT_EQ(skst_bench_loop(nullptr, "real", 0.0, "hold", &rep), SKST_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ServerLifecycle) {
  TempDir dir;
  write_file(dir / "s.toml", "[server]\nport = 0\nclock = \"sim\"\nlog_dir = \"logs\"\n[[robots]]\nid = 1\n");
  skst_server* s = nullptr;
  ASSERT_EQ(skst_server_create((dir / "s.toml").c_str(), nullptr, -1, &s), SKST_OK);
  ASSERT_EQ(skst_server_start(s), SKST_OK);
  const int port = skst_server_port(s);
  EXPECT_GT(port, 0);
  skst_client* c = nullptr;
  ASSERT_EQ(skst_client_connect("127.0.0.1", static_cast<std::uint16_t>(port), &c), SKST_OK);
  const double w[6] = {0, 0, -6, 0, 0, 0};
  EXPECT_EQ(skst_client_inject_wrench(c, 1, w, 0.05), SKST_OK);
  EXPECT_EQ(skst_client_inject_wrench(c, 7, w, 0.05), SKST_ERR_UNKNOWN_ROBOT);
  skst_client_close(c);
  EXPECT_EQ(skst_server_stop(s), SKST_OK);
  skst_server_destroy(s);
  EXPECT_TRUE(std::filesystem::exists(dir / "logs" / "robot_1.filg"));
}

TEST(Cli, UsageErrorsExitTwo) {
  const std::string cli = cli_path();
  EXPECT_EQ(run_command(cli).exit_code, 2);
  EXPECT_EQ(run_command(cli + " frobnicate").exit_code, 2);
  EXPECT_EQ(run_command(cli + " logdump /tmp/x.filg --bogus").exit_code, 2);
  EXPECT_EQ(run_command(cli + " bench loop --duration 0").exit_code, 2);
  EXPECT_EQ(run_command(cli + " bench loop").exit_code, 2);
  EXPECT_EQ(run_command(cli + " inject-wrench --robot 0 --fz 1 --duration 0").exit_code, 2);
  EXPECT_EQ(run_command(cli + " inject-wrench --robot 0 --fz 1").exit_code, 2);
  EXPECT_EQ(run_command(cli + " serve --clock fast").exit_code, 2);
  EXPECT_EQ(run_command(cli + " --help").exit_code, 0);
}

TEST(Cli, BenchRejectsSimClock) {
  const auto r = run_command(cli_path() + " bench loop --duration 1 --clock sim");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("bench requires real clock"), std::string::npos);
}

TEST(Cli, BenchPrintsMachineReadableLine) {
  const auto r = run_command(cli_path() + " bench loop --duration 0.3", false);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("BENCH mean_us="), std::string::npos);
  EXPECT_NE(r.out.find(" p99_us="), std::string::npos);
  EXPECT_NE(r.out.find(" missed="), std::string::npos);
}

TEST(Cli, ValidateConfig) {
  TempDir dir;
  const std::string cli = cli_path();
  EXPECT_EQ(run_command(cli + " validate-config " + quoted(testing::config_dir() / "server.toml")).exit_code, 0);
  EXPECT_EQ(run_command(cli + " validate-config " + quoted(testing::config_dir() / "panda_arm.toml")).exit_code, 0);
  write_file(dir / "bad.toml", "[server]\nstate_rate_hz = -5\n[[robots]]\nid = 0\n");
  const auto r = run_command(cli + " validate-config " + quoted(dir / "bad.toml"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("bad.toml"), std::string::npos);
  EXPECT_NE(r.out.find("state_rate_hz"), std::string::npos);
  EXPECT_EQ(run_command(cli + " validate-config " + quoted(dir / "missing.toml")).exit_code, 1);
}

TEST(Cli, LogdumpHeaderOnlyAndTruncated) {
  TempDir dir;
  const std::string cli = cli_path();
  {
    std::ofstream out(dir / "empty.filg", std::ios::binary);
    const auto h = log::encode_header(0);
    out.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size()));
  }
  auto r = run_command(cli + " logdump " + quoted(dir / "empty.filg"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("0 records"), std::string::npos);

  const auto path = make_log(dir, 10);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 7);
  r = run_command(cli + " logdump --csv " + quoted(path));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("warning"), std::string::npos);
  EXPECT_NE(r.out.find("salvaged 9 records"), std::string::npos);

  write_file(dir / "junk.filg", "not a log at all");
  r = run_command(cli + " logdump " + quoted(dir / "junk.filg"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("magic"), std::string::npos);
}

std::vector<double> split_doubles(const std::string& line) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
  return v;
}

TEST(Cli, LogdumpCsvRoundTripsExactly) {
  TempDir dir;
  const auto path = make_log(dir, 300);
  const auto r = run_command(cli_path() + " logdump --csv " + quoted(path), false);
  ASSERT_EQ(r.exit_code, 0);
  std::stringstream ss(r.out);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line.rfind("tick,wall_ns,q0", 0), 0U);
  const log::LogFile f = log::read_log(path);
  std::size_t row = 0;
  while (std::getline(ss, line)) {
    ASSERT_LT(row, f.records.size());
    const RobotState& s = f.records[row];
    const std::vector<double> v = split_doubles(line);
    ASSERT_EQ(v.size(), 2U + 28U + 3U + 4U + 6U + 1U + 3U);
    EXPECT_EQ(static_cast<std::uint64_t>(v[0]), s.tick);
    for (int i = 0; i < 7; ++i) {
      ASSERT_EQ(v[2 + i], s.q[i]);
      ASSERT_EQ(v[9 + i], s.dq[i]);
      ASSERT_EQ(v[16 + i], s.tau_commanded[i]);
      ASSERT_EQ(v[23 + i], s.tau_external[i]);
    }
    for (int i = 0; i < 3; ++i) ASSERT_EQ(v[30 + i], s.ee_pose.position()[i]);
    ASSERT_EQ(v[33], s.ee_pose.orientation().w());
    ASSERT_EQ(v[36], s.ee_pose.orientation().z());
    for (int i = 0; i < 6; ++i) ASSERT_EQ(v[37 + i], s.ee_wrench_external.as_vector()[i]);
    ASSERT_EQ(v[43], s.gripper_width);
    ++row;
  }
  EXPECT_EQ(row, 300U);
}

TEST(Cli, ServeInjectAndShutdownOnSignal) {
  TempDir dir;
  write_file(dir / "s.toml", "[server]\nport = 0\nclock = \"sim\"\nlog_dir = \"logs\"\n[[robots]]\nid = 6\n");
  const auto out = dir / "serve.out";
  const std::string cmd = cli_path() + " serve --config " + quoted(dir / "s.toml") + " > " + quoted(out) +
                          " 2>&1 & echo $!";
  const auto launched = run_command(cmd, false);
  const pid_t pid = static_cast<pid_t>(std::stol(launched.out));
  int port = 0;
  for (int i = 0; i < 100 && port == 0; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    std::ifstream in(out);
    std::string word;
    while (in >> word) {
      if (word.rfind("port=", 0) == 0) port = std::stoi(word.substr(5));
    }
  }
  ASSERT_GT(port, 0);
  const std::string addr = " --addr 127.0.0.1:" + std::to_string(port);
  auto r = run_command(cli_path() + " inject-wrench --robot 6 --fz -6 --duration 0.1" + addr);
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("ack"), std::string::npos);
  r = run_command(cli_path() + " inject-wrench --robot 9 --fz -6 --duration 0.1" + addr);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("UNKNOWN_ROBOT"), std::string::npos);

  ASSERT_EQ(::kill(pid, SIGINT), 0);
  bool exited = false;
  for (int i = 0; i < 100 && !exited; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    exited = ::kill(pid, 0) != 0;
  }
  EXPECT_TRUE(exited);
  EXPECT_EQ(log::read_log(dir / "logs" / "robot_6.filg").records.size(), 100U);
}

TEST(Cli, ServeFailsOnBadConfigAndPortConflict) {
  TempDir dir;
  write_file(dir / "bad.toml", "[server]\nclock = 3\n[[robots]]\nid = 0\n");
  auto r = run_command(cli_path() + " serve --config " + quoted(dir / "bad.toml"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("clock"), std::string::npos);

  net::Listener busy("127.0.0.1", 0);
  write_file(dir / "s.toml", "[server]\nclock = \"sim\"\nlog_dir = \"logs\"\nport = " +
                                 std::to_string(busy.port()) + "\n[[robots]]\nid = 0\n");
  r = run_command(cli_path() + " serve --config " + quoted(dir / "s.toml"));
  EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, InjectWrenchConnectionRefused) {
  int port = 0;
  {
    net::Listener probe("127.0.0.1", 0);
    port = probe.port();
  }
  const auto r = run_command(cli_path() + " inject-wrench --robot 0 --fx 1 --duration 1 --addr 127.0.0.1:" +
                             std::to_string(port));
  EXPECT_EQ(r.exit_code, 1);
}

}  // namespace
}  // namespace skillstack
