// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skillstack/net/socket.hpp"
#include "skillstack/wire/frame.hpp"
#include "skillstack/wire/messages.hpp"

namespace skillstack::client {

// An Error reply from the server.
class ServerError : public std::runtime_error {
 public:
  explicit ServerError(wire::AckMsg ack);
  wire::ErrorCode code() const { return ack_.code; }
  const wire::AckMsg& ack() const { return ack_; }

 private:
  wire::AckMsg ack_;
};

// Synchronous protocol client. Frames that arrive while waiting for a
// specific reply are kept in an inbox, so nothing is lost between calls.
class Client {
 public:
  using Clock = std::chrono::steady_clock;
  static constexpr std::chrono::milliseconds kDefaultTimeout{10000};

  Client(const std::string& host, std::uint16_t port);

  void send(wire::MessageType type, std::uint16_t robot_id, std::span<const std::uint8_t> payload);
  void send_raw(std::span<const std::uint8_t> bytes) { sock_.send_all(bytes); }

  // Next frame from the inbox or the socket; nullopt on timeout.
  std::optional<wire::Frame> receive(std::chrono::milliseconds timeout);
  // First frame satisfying `pred`; others stay queued. Throws on timeout.
  wire::Frame wait_for(const std::function<bool(const wire::Frame&)>& pred,
                       std::chrono::milliseconds timeout = kDefaultTimeout);

  // Sends a request and returns its Ack; throws ServerError on an Error reply.
  wire::AckMsg request(wire::MessageType type, std::uint16_t robot_id, std::span<const std::uint8_t> payload,
                       std::chrono::milliseconds timeout = kDefaultTimeout);

  std::uint32_t execute(std::uint16_t robot_id, const skill::SkillSpec& spec);
  wire::SkillStatusMsg wait_status(std::uint16_t robot_id, std::uint32_t skill_id, bool terminal_only = true,
                                   std::chrono::milliseconds timeout = std::chrono::milliseconds(120000));
  void preempt(std::uint16_t robot_id, std::uint32_t skill_id = 0);
  std::uint32_t subscribe(std::uint16_t robot_id, std::uint32_t rate_hz);
  RobotState get_state(std::uint16_t robot_id);
  void inject_wrench(std::uint16_t robot_id, const Wrench& w, double duration);
  void reconfigure_safety(std::uint16_t robot_id, const safety::SafetyConfig& cfg);
  // Sensor messages are not acknowledged; errors arrive asynchronously.
  void send_sensor(std::uint16_t robot_id, const skill::SensorUpdate& update);

  // Removes and returns queued state frames for the robot.
  std::vector<RobotState> take_states(std::uint16_t robot_id);
  void close() { sock_.shutdown(); sock_.close(); }

 private:
  bool read_more(std::chrono::milliseconds timeout);

  net::Socket sock_;
  wire::FrameDecoder decoder_;
  std::deque<wire::Frame> inbox_;
};

}  // namespace skillstack::client
