// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/net/client.hpp"

#include <algorithm>

#include "skillstack/wire/skill_codec.hpp"

namespace skillstack::client {

using wire::MessageType;

ServerError::ServerError(wire::AckMsg ack)
    : std::runtime_error(std::string(wire::to_string(ack.code)) + ": " + ack.message), ack_(std::move(ack)) {}

Client::Client(const std::string& host, std::uint16_t port) : sock_(net::connect_tcp(host, port)) {}

void Client::send(MessageType type, std::uint16_t robot_id, std::span<const std::uint8_t> payload) {
  sock_.send_all(wire::encode_frame(type, robot_id, payload));
}

bool Client::read_more(std::chrono::milliseconds timeout) {
  std::vector<std::uint8_t> buf(64 * 1024);
  const std::optional<std::size_t> n = sock_.recv_some(buf, timeout);
  if (!n) throw net::NetError("connection closed by server");
  if (*n == 0) return false;
  decoder_.feed(std::span<const std::uint8_t>(buf.data(), *n));
  while (auto ev = decoder_.next()) {
    if (ev->ok()) inbox_.push_back(std::get<wire::Frame>(std::move(ev->value)));
  }
  return true;
}

std::optional<wire::Frame> Client::receive(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  while (inbox_.empty()) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) return std::nullopt;
    read_more(left);
  }
  wire::Frame f = std::move(inbox_.front());
  inbox_.pop_front();
  return f;
}

wire::Frame Client::wait_for(const std::function<bool(const wire::Frame&)>& pred, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::size_t scanned = 0;
  for (;;) {
    for (; scanned < inbox_.size(); ++scanned) {
      if (pred(inbox_[scanned])) {
        wire::Frame f = std::move(inbox_[scanned]);
        inbox_.erase(inbox_.begin() + static_cast<std::ptrdiff_t>(scanned));
        return f;
      }
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) throw net::NetError("timed out waiting for server reply");
    read_more(std::min(left, std::chrono::milliseconds(100)));
  }
}

wire::AckMsg Client::request(MessageType type, std::uint16_t robot_id, std::span<const std::uint8_t> payload,
                             std::chrono::milliseconds timeout) {
  send(type, robot_id, payload);
  const auto code = static_cast<std::uint8_t>(type);
  wire::Frame f = wait_for(
      [&](const wire::Frame& fr) {
        if (fr.msg_type != static_cast<std::uint8_t>(MessageType::AckError)) return false;
        // Stream-level errors are not tied to a request and carry type 0.
        return fr.payload.size() >= 3 && (fr.payload[2] == code || fr.payload[2] == 0);
      },
      timeout);
  wire::AckMsg ack = wire::decode_ack(f.payload);
  if (!ack.ok()) throw ServerError(std::move(ack));
  return ack;
}

std::uint32_t Client::execute(std::uint16_t robot_id, const skill::SkillSpec& spec) {
  return request(MessageType::ExecuteSkill, robot_id, wire::encode_skill_spec(spec)).value;
}

wire::SkillStatusMsg Client::wait_status(std::uint16_t robot_id, std::uint32_t skill_id, bool terminal_only,
                                         std::chrono::milliseconds timeout) {
  wire::Frame f = wait_for(
      [&](const wire::Frame& fr) {
        if (fr.msg_type != static_cast<std::uint8_t>(MessageType::SkillStatus) || fr.robot_id != robot_id) return false;
        const wire::SkillStatusMsg st = wire::decode_status(fr.payload);
        return st.skill_id == skill_id && (!terminal_only || wire::is_terminal(st.phase));
      },
      timeout);
  return wire::decode_status(f.payload);
}

void Client::preempt(std::uint16_t robot_id, std::uint32_t skill_id) {
  request(MessageType::PreemptSkill, robot_id, wire::encode(wire::PreemptMsg{skill_id}));
}

std::uint32_t Client::subscribe(std::uint16_t robot_id, std::uint32_t rate_hz) {
  return request(MessageType::SubscribeState, robot_id, wire::encode(wire::SubscribeMsg{rate_hz})).value;
}

RobotState Client::get_state(std::uint16_t robot_id) {
  send(MessageType::RobotStateMsg, robot_id, {});
  // A reply to this request is a RobotState frame or an Error; subscription
  // frames for the same robot are indistinguishable, which is harmless since
  // any of them is a current state.
  wire::Frame f = wait_for([&](const wire::Frame& fr) {
    if (fr.robot_id != robot_id) return false;
    if (fr.msg_type == static_cast<std::uint8_t>(MessageType::RobotStateMsg)) return true;
    return fr.msg_type == static_cast<std::uint8_t>(MessageType::AckError) && fr.payload.size() >= 3 &&
           fr.payload[2] == static_cast<std::uint8_t>(MessageType::RobotStateMsg);
  });
  if (f.msg_type == static_cast<std::uint8_t>(MessageType::AckError)) throw ServerError(wire::decode_ack(f.payload));
  return wire::decode_state(f.payload);
}

void Client::inject_wrench(std::uint16_t robot_id, const Wrench& w, double duration) {
  request(MessageType::InjectWrench, robot_id, wire::encode(wire::InjectWrenchMsg{w, duration}));
}

void Client::reconfigure_safety(std::uint16_t robot_id, const safety::SafetyConfig& cfg) {
  request(MessageType::SafetyReconfig, robot_id, wire::encode(cfg));
}

void Client::send_sensor(std::uint16_t robot_id, const skill::SensorUpdate& update) {
  send(MessageType::SensorMsg, robot_id, wire::encode(update));
}

std::vector<RobotState> Client::take_states(std::uint16_t robot_id) {
  std::vector<RobotState> out;
  auto keep = std::stable_partition(inbox_.begin(), inbox_.end(), [&](const wire::Frame& f) {
    return !(f.robot_id == robot_id && f.msg_type == static_cast<std::uint8_t>(MessageType::RobotStateMsg));
  });
  for (auto it = keep; it != inbox_.end(); ++it) out.push_back(wire::decode_state(it->payload));
  inbox_.erase(keep, inbox_.end());
  return out;
}

}  // namespace skillstack::client
