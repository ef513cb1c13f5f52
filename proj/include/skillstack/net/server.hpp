// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "skillstack/robot_core.hpp"
#include "skillstack/server_config.hpp"

namespace skillstack::server {

struct ServerStats {
  std::uint64_t sessions_accepted = 0;
  std::uint64_t frames_received = 0;
  std::uint64_t frame_errors = 0;
  std::uint64_t state_frames_dropped = 0;
};

// TCP front end over one RobotCore per configured robot.
// 
// Threads: one acceptor, one dispatcher fanning loop output out to
// sessions, and a reader plus a writer per session. Everything that
// crosses into a control loop goes through its mailbox.
class Server {
 public:
  // Loads every arm file and binds the listener. Throws ConfigError or
  // net::NetError.
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  void start();
  // Preempts running skills, delivers their final status, writes one log
  // per robot into log_dir, then closes all sessions. Idempotent.
  void stop();

  std::uint16_t port() const;
  const ServerConfig& config() const;
  core::RobotCore* robot(std::uint16_t id);
  std::vector<std::uint16_t> robot_ids() const;
  ServerStats stats() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace skillstack::server
