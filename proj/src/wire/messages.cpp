// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/wire/messages.hpp"

#include <cstring>

namespace skillstack::wire {

namespace {

template <typename Derived>
void put_reals(ByteWriter& w, const Eigen::MatrixBase<Derived>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) w.f64(v(i));
}

template <int N>
Eigen::Matrix<double, N, 1> get_reals(ByteReader& r) {
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = r.f64();
  return v;
}

void require_finite(bool finite, const char* what) {
  if (!finite) throw WireException(WireError::EncodeNonFinite, what);
}

}  // namespace

void encode_state_record(const RobotState& s, std::span<std::uint8_t, kStateRecordSize> out) {
  require_finite(all_finite(s.q) && all_finite(s.dq) && all_finite(s.tau_commanded) && all_finite(s.tau_external),
                 "joint vectors");
  require_finite(all_finite(s.ee_pose) && all_finite(s.ee_wrench_external) && std::isfinite(s.gripper_width),
                 "pose, wrench or gripper width");
  std::vector<std::uint8_t> buf;
  buf.reserve(kStateRecordSize);
  ByteWriter w(buf);
  w.u64(s.tick);
  w.u64(s.wall_ns);
  put_reals(w, s.q);
  put_reals(w, s.dq);
  put_reals(w, s.tau_commanded);
  put_reals(w, s.tau_external);
  put_reals(w, s.ee_pose.position());
  const Eigen::Quaterniond& q = s.ee_pose.orientation();
  put_reals(w, Eigen::Vector4d(q.w(), q.x(), q.y(), q.z()));
  put_reals(w, s.ee_wrench_external.as_vector());
  w.f64(s.gripper_width);
  w.u32(s.active_skill_id.value_or(0));
  w.u8(static_cast<std::uint8_t>(s.skill_phase));
  w.u8(s.gripper_moving ? 1 : 0);
  w.u16(0);
  std::memcpy(out.data(), buf.data(), kStateRecordSize);
}

StateRecord encode_state_record(const RobotState& s) {
  StateRecord r{};
  encode_state_record(s, r);
  return r;
}

RobotState decode_state_record(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kStateRecordSize) {
    throw WireException(WireError::MalformedBlock, "state record of " + std::to_string(bytes.size()) + " bytes");
  }
  ByteReader r(bytes);
  RobotState s;
  s.tick = r.u64();
  s.wall_ns = r.u64();
  s.q = get_reals<7>(r);
  s.dq = get_reals<7>(r);
  s.tau_commanded = get_reals<7>(r);
  s.tau_external = get_reals<7>(r);
  const Eigen::Vector3d p = get_reals<3>(r);
  const Eigen::Vector4d q = get_reals<4>(r);
  try {
    s.ee_pose = Pose::from_wxyz(p, q[0], q[1], q[2], q[3]);
  } catch (const std::invalid_argument& e) {
    throw WireException(WireError::MalformedBlock, e.what());
  }
  s.ee_wrench_external = Wrench::from_vector(get_reals<6>(r));
  s.gripper_width = r.f64();
  const std::uint32_t id = r.u32();
  if (id != 0) s.active_skill_id = id;
  const std::uint8_t phase = r.u8();
  if (phase > static_cast<std::uint8_t>(SkillPhase::Aborted)) {
    throw WireException(WireError::MalformedBlock, "skill phase " + std::to_string(phase));
  }
  s.skill_phase = static_cast<SkillPhase>(phase);
  const std::uint8_t flags = r.u8();
  if ((flags & ~1U) != 0 || r.u16() != 0) throw WireException(WireError::MalformedBlock, "nonzero padding");
  s.gripper_moving = (flags & 1U) != 0;
  return s;
}

std::string_view to_string(StatusPhase p) {
  switch (p) {
    case StatusPhase::Queued: return "queued";
    case StatusPhase::Running: return "running";
    case StatusPhase::Succeeded: return "succeeded";
    case StatusPhase::Preempted: return "preempted";
    case StatusPhase::Aborted: return "aborted";
  }
  return "unknown";
}

bool is_terminal(StatusPhase p) {
  return p == StatusPhase::Succeeded || p == StatusPhase::Preempted || p == StatusPhase::Aborted;
}

StatusPhase phase_for(skill::TerminationCause cause) {
  using skill::TerminationCause;
  switch (cause) {
    case TerminationCause::Time:
    case TerminationCause::JointGoal:
    case TerminationCause::PoseGoal:
    case TerminationCause::Contact: return StatusPhase::Succeeded;
    case TerminationCause::Preempt: return StatusPhase::Preempted;
    case TerminationCause::SafetyCap:
    case TerminationCause::WallViolation:
    case TerminationCause::CommandError: return StatusPhase::Aborted;
  }
  return StatusPhase::Aborted;
}

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::Ok: return "OK";
    case ErrorCode::UnknownType: return "UNKNOWN_TYPE";
    case ErrorCode::BadCrc: return "BAD_CRC";
    case ErrorCode::MalformedBlock: return "MALFORMED_BLOCK";
    case ErrorCode::Invalid: return "INVALID";
    case ErrorCode::Busy: return "BUSY";
    case ErrorCode::UnknownRobot: return "UNKNOWN_ROBOT";
    case ErrorCode::MailboxFull: return "MAILBOX_FULL";
    case ErrorCode::UnknownVariant: return "UNKNOWN_VARIANT";
    case ErrorCode::NotStarted: return "NOT_STARTED";
    case ErrorCode::Oversize: return "OVERSIZE";
    case ErrorCode::Internal: return "INTERNAL";
    case ErrorCode::EncodeNonFinite: return "NON_FINITE";
    case ErrorCode::BadMagic: return "BAD_MAGIC";
    case ErrorCode::Truncated: return "TRUNCATED";
  }
  return "UNKNOWN";
}

ErrorCode error_code_for(WireError e) {
  switch (e) {
    case WireError::BadMagic: return ErrorCode::BadMagic;
    case WireError::BadCrc: return ErrorCode::BadCrc;
    case WireError::Oversize: return ErrorCode::Oversize;
    case WireError::Truncated: return ErrorCode::Truncated;
    case WireError::UnknownVariant: return ErrorCode::UnknownVariant;
    case WireError::MalformedBlock: return ErrorCode::MalformedBlock;
    case WireError::EncodeNonFinite: return ErrorCode::EncodeNonFinite;
  }
  return ErrorCode::Internal;
}

// Status: skill_id u32 | phase u8 | has_cause u8 | cause u8 | state record.
std::vector<std::uint8_t> encode(const SkillStatusMsg& m) {
  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  w.u32(m.skill_id);
  w.u8(static_cast<std::uint8_t>(m.phase));
  w.u8(m.cause ? 1 : 0);
  w.u8(m.cause ? static_cast<std::uint8_t>(*m.cause) : 0);
  const StateRecord rec = encode_state_record(m.state);
  w.bytes(rec);
  return out;
}

SkillStatusMsg decode_status(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  SkillStatusMsg m;
  m.skill_id = r.u32();
  const std::uint8_t phase = r.u8();
  if (phase > 4) throw WireException(WireError::UnknownVariant, "status phase");
  m.phase = static_cast<StatusPhase>(phase);
  const std::uint8_t has_cause = r.u8();
  const std::uint8_t cause = r.u8();
  if (has_cause > 1 || cause > 7) throw WireException(WireError::UnknownVariant, "termination cause");
  if (has_cause != 0) m.cause = static_cast<skill::TerminationCause>(cause);
  m.state = decode_state_record(r.take(kStateRecordSize));
  r.expect_end("status");
  return m;
}

// Ack: code u16 | request_type u8 | value u32 | message | n u32 | violations.
std::vector<std::uint8_t> encode(const AckMsg& m) {
  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  w.u16(static_cast<std::uint16_t>(m.code));
  w.u8(m.request_type);
  w.u32(m.value);
  w.string(m.message);
  w.u32(static_cast<std::uint32_t>(m.violations.size()));
  for (const std::string& v : m.violations) w.string(v);
  return out;
}

AckMsg decode_ack(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  AckMsg m;
  const std::uint16_t code = r.u16();
  if (code > static_cast<std::uint16_t>(ErrorCode::Truncated)) {
    throw WireException(WireError::UnknownVariant, "error code " + std::to_string(code));
  }
  m.code = static_cast<ErrorCode>(code);
  m.request_type = r.u8();
  m.value = r.u32();
  m.message = r.string();
  const std::uint32_t n = r.u32();
  if (static_cast<std::uint64_t>(n) * 4 > r.remaining()) throw WireException(WireError::MalformedBlock, "violations");
  for (std::uint32_t i = 0; i < n; ++i) m.violations.push_back(r.string());
  r.expect_end("ack");
  return m;
}

std::vector<std::uint8_t> encode(const SubscribeMsg& m) {
  std::vector<std::uint8_t> out;
  ByteWriter(out).u32(m.rate_hz);
  return out;
}

SubscribeMsg decode_subscribe(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  SubscribeMsg m{r.u32()};
  r.expect_end("subscribe");
  return m;
}

// Inject: wrench (6 f64) | duration f64.
std::vector<std::uint8_t> encode(const InjectWrenchMsg& m) {
  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  put_reals(w, m.wrench.as_vector());
  w.f64(m.duration);
  return out;
}

InjectWrenchMsg decode_inject(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  InjectWrenchMsg m;
  m.wrench = Wrench::from_vector(get_reals<6>(r));
  m.duration = r.f64();
  r.expect_end("inject");
  return m;
}

std::vector<std::uint8_t> encode(const PreemptMsg& m) {
  std::vector<std::uint8_t> out;
  if (m.skill_id != 0) ByteWriter(out).u32(m.skill_id);
  return out;
}

PreemptMsg decode_preempt(std::span<const std::uint8_t> b) {
  if (b.empty()) return {};
  ByteReader r(b);
  PreemptMsg m{r.u32()};
  r.expect_end("preempt");
  return m;
}

// Sensor: topic | timestamp f64 | payload tag u16 | len u32 | fields.
// Tags: 1 joint setpoint, 2 pose setpoint, 3 pose goal override, 4 joint goal override.
std::vector<std::uint8_t> encode(const skill::SensorUpdate& m) {
  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  w.string(m.topic);
  w.f64(m.timestamp);
  std::uint16_t tag = 0;
  std::vector<std::uint8_t> body;
  ByteWriter bw(body);
  if (const auto* j = std::get_if<skill::JointSetpoint>(&m.payload)) {
    tag = 1;
    bw.array(j->q);
  } else if (const auto* p = std::get_if<skill::PoseSetpoint>(&m.payload)) {
    tag = 2;
    bw.pose(p->pose);
  } else {
    const auto& g = std::get<skill::GoalOverride>(m.payload);
    if (const auto* gp = std::get_if<Pose>(&g.goal)) {
      tag = 3;
      bw.pose(*gp);
    } else {
      tag = 4;
      bw.array(std::get<JointVector>(g.goal));
    }
  }
  w.u16(tag);
  w.u32(static_cast<std::uint32_t>(body.size()));
  w.bytes(body);
  return out;
}

skill::SensorUpdate decode_sensor(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  skill::SensorUpdate m;
  m.topic = r.string();
  m.timestamp = r.f64();
  const std::uint16_t tag = r.u16();
  ByteReader body = r.sub(r.u32());
  switch (tag) {
    case 1: m.payload = skill::JointSetpoint{body.fixed_array<7>()}; break;
    case 2: m.payload = skill::PoseSetpoint{body.pose()}; break;
    case 3: m.payload = skill::GoalOverride{body.pose()}; break;
    case 4: m.payload = skill::GoalOverride{JointVector(body.fixed_array<7>())}; break;
    default: throw WireException(WireError::UnknownVariant, "sensor payload tag " + std::to_string(tag));
  }
  body.expect_end("sensor payload");
  r.expect_end("sensor");
  return m;
}

// Safety: enabled u8 | ee_half_extents array | has_workspace u8 [box] | n u32 | boxes.
// A box is center array + half_extents array.
std::vector<std::uint8_t> encode(const safety::SafetyConfig& m) {
  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  w.u8(m.enabled ? 1 : 0);
  w.array(m.ee_half_extents);
  w.u8(m.workspace ? 1 : 0);
  if (m.workspace) {
    w.array(m.workspace->center);
    w.array(m.workspace->half_extents);
  }
  w.u32(static_cast<std::uint32_t>(m.walls.size()));
  for (const safety::Box& b : m.walls) {
    w.array(b.center);
    w.array(b.half_extents);
  }
  return out;
}

safety::SafetyConfig decode_safety(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  safety::SafetyConfig m;
  const std::uint8_t enabled = r.u8();
  if (enabled > 1) throw WireException(WireError::MalformedBlock, "enabled flag");
  m.enabled = enabled == 1;
  m.ee_half_extents = r.fixed_array<3>();
  const std::uint8_t has_ws = r.u8();
  if (has_ws > 1) throw WireException(WireError::MalformedBlock, "workspace flag");
  if (has_ws == 1) {
    safety::Box ws;
    ws.center = r.fixed_array<3>();
    ws.half_extents = r.fixed_array<3>();
    m.workspace = ws;
  }
  const std::uint32_t n = r.u32();
  if (static_cast<std::uint64_t>(n) * 56 > r.remaining()) throw WireException(WireError::MalformedBlock, "walls");
  for (std::uint32_t i = 0; i < n; ++i) {
    safety::Box box;
    box.center = r.fixed_array<3>();
    box.half_extents = r.fixed_array<3>();
    m.walls.push_back(box);
  }
  r.expect_end("safety");
  return m;
}

std::vector<std::uint8_t> encode(const RobotState& m) {
  const StateRecord rec = encode_state_record(m);
  return std::vector<std::uint8_t>(rec.begin(), rec.end());
}

RobotState decode_state(std::span<const std::uint8_t> b) { return decode_state_record(b); }

}  // namespace skillstack::wire
