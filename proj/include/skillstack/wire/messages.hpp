// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skillstack/robot_state.hpp"
#include "skillstack/safety.hpp"
#include "skillstack/skill_spec.hpp"
#include "skillstack/termination.hpp"
#include "skillstack/wire/bytes.hpp"

namespace skillstack::wire {

// Robot state record, shared by log files and RobotState messages:
//   0 tick u64 | 8 wall_ns u64 | 16 q | 72 dq | 128 tau_cmd | 184 tau_ext (7 f64 each)
//   240 position (3 f64) | 264 quaternion wxyz (4 f64) | 296 wrench (6 f64)
//   344 gripper width f64 | 352 skill id u32 (0 = none) | 356 phase u8
//   357 flags u8 (bit 0 = gripper moving) | 358 zero padding to 360
constexpr std::size_t kStateRecordSize = 360;
using StateRecord = std::array<std::uint8_t, kStateRecordSize>;

// Throws WireException(EncodeNonFinite) if any real is NaN or infinite.
void encode_state_record(const RobotState& s, std::span<std::uint8_t, kStateRecordSize> out);
StateRecord encode_state_record(const RobotState& s);
RobotState decode_state_record(std::span<const std::uint8_t> bytes);

enum class StatusPhase : std::uint8_t { Queued = 0, Running = 1, Succeeded = 2, Preempted = 3, Aborted = 4 };
std::string_view to_string(StatusPhase p);
bool is_terminal(StatusPhase p);
StatusPhase phase_for(skill::TerminationCause cause);

struct SkillStatusMsg {
  std::uint32_t skill_id = 0;
  StatusPhase phase = StatusPhase::Queued;
  std::optional<skill::TerminationCause> cause;
  RobotState state;
  bool operator==(const SkillStatusMsg&) const = default;
};

enum class ErrorCode : std::uint16_t {
  Ok = 0,
  UnknownType = 1,
  BadCrc = 2,
  MalformedBlock = 3,
  Invalid = 4,
  Busy = 5,
  UnknownRobot = 6,
  MailboxFull = 7,
  UnknownVariant = 8,
  NotStarted = 9,
  Oversize = 10,
  Internal = 11,
  EncodeNonFinite = 12,
  BadMagic = 13,
  Truncated = 14,
};
std::string_view to_string(ErrorCode c);
ErrorCode error_code_for(WireError e);

// Reply to any request. `value` carries the skill id for ExecuteSkill and
// the granted rate for SubscribeState.
struct AckMsg {
  ErrorCode code = ErrorCode::Ok;
  std::uint8_t request_type = 0;
  std::uint32_t value = 0;
  std::string message;
  std::vector<std::string> violations;
  bool ok() const { return code == ErrorCode::Ok; }
  bool operator==(const AckMsg&) const = default;
};

struct SubscribeMsg {
  // 0 unsubscribes.
  std::uint32_t rate_hz = 100;
  bool operator==(const SubscribeMsg&) const = default;
};

struct InjectWrenchMsg {
  Wrench wrench;
  double duration = 0.0;
  bool operator==(const InjectWrenchMsg&) const = default;
};

struct PreemptMsg {
  // 0 preempts whatever skill is active.
  std::uint32_t skill_id = 0;
  bool operator==(const PreemptMsg&) const = default;
};

std::vector<std::uint8_t> encode(const SkillStatusMsg& m);
std::vector<std::uint8_t> encode(const AckMsg& m);
std::vector<std::uint8_t> encode(const SubscribeMsg& m);
std::vector<std::uint8_t> encode(const InjectWrenchMsg& m);
// Empty payload when skill_id is 0.
std::vector<std::uint8_t> encode(const PreemptMsg& m);
std::vector<std::uint8_t> encode(const skill::SensorUpdate& m);
std::vector<std::uint8_t> encode(const safety::SafetyConfig& m);
std::vector<std::uint8_t> encode(const RobotState& m);

SkillStatusMsg decode_status(std::span<const std::uint8_t> b);
AckMsg decode_ack(std::span<const std::uint8_t> b);
SubscribeMsg decode_subscribe(std::span<const std::uint8_t> b);
InjectWrenchMsg decode_inject(std::span<const std::uint8_t> b);
PreemptMsg decode_preempt(std::span<const std::uint8_t> b);
skill::SensorUpdate decode_sensor(std::span<const std::uint8_t> b);
safety::SafetyConfig decode_safety(std::span<const std::uint8_t> b);
RobotState decode_state(std::span<const std::uint8_t> b);

}  // namespace skillstack::wire
