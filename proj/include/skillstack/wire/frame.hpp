// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "skillstack/wire/bytes.hpp"

namespace skillstack::wire {

enum class MessageType : std::uint8_t {
  ExecuteSkill = 0x01,
  PreemptSkill = 0x02,
  SkillStatus = 0x03,
  RobotStateMsg = 0x04,
  SensorMsg = 0x05,
  SubscribeState = 0x06,
  SafetyReconfig = 0x07,
  InjectWrench = 0x08,
  AckError = 0x09,
};

bool is_known_type(std::uint8_t t);
std::string_view to_string(MessageType t);

constexpr std::uint8_t kMagic[4] = {'F', 'I', 'F', 'P'};
constexpr std::uint8_t kProtocolVersion = 1;
constexpr std::size_t kHeaderSize = 12;
constexpr std::size_t kCrcSize = 4;
constexpr std::size_t kMaxPayload = 1U << 20;

// msg_type is kept raw so unknown types can be answered rather than dropped.
struct Frame {
  std::uint8_t msg_type = 0;
  std::uint16_t robot_id = 0;
  std::vector<std::uint8_t> payload;
  bool operator==(const Frame&) const = default;
};

std::vector<std::uint8_t> encode_frame(std::uint8_t msg_type, std::uint16_t robot_id,
                                       std::span<const std::uint8_t> payload);
inline std::vector<std::uint8_t> encode_frame(MessageType t, std::uint16_t robot_id,
                                              std::span<const std::uint8_t> payload) {
  return encode_frame(static_cast<std::uint8_t>(t), robot_id, payload);
}
inline std::vector<std::uint8_t> encode_frame(const Frame& f) { return encode_frame(f.msg_type, f.robot_id, f.payload); }

// Decodes exactly one frame occupying all of `bytes`.
Frame decode_frame(std::span<const std::uint8_t> bytes);

struct DecodeEvent {
  std::variant<Frame, WireError> value;
  bool ok() const { return std::holds_alternative<Frame>(value); }
};

// Incremental stream decoder. Feed arbitrary chunks; pull frames and error
// events in stream order. After a corrupt frame it rescans for the next
// magic, so garbage between frames costs at most one error event per run.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  std::optional<DecodeEvent> next();
  // Signals end of stream: a buffered partial frame yields Truncated.
  std::optional<DecodeEvent> finish();
  std::size_t buffered() const { return buf_.size() - start_; }

 private:
  void consume(std::size_t n);
  bool resync();

  std::vector<std::uint8_t> buf_;
  std::size_t start_ = 0;
  bool in_garbage_ = false;
};

}  // namespace skillstack::wire
