// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/wire/frame.hpp"

#include <algorithm>
#include <cstring>

#include "skillstack/wire/crc32.hpp"

namespace skillstack::wire {

bool is_known_type(std::uint8_t t) { return t >= 0x01 && t <= 0x09; }

std::string_view to_string(MessageType t) {
  switch (t) {
    case MessageType::ExecuteSkill: return "ExecuteSkill";
    case MessageType::PreemptSkill: return "PreemptSkill";
    case MessageType::SkillStatus: return "SkillStatus";
    case MessageType::RobotStateMsg: return "RobotState";
    case MessageType::SensorMsg: return "SensorMsg";
    case MessageType::SubscribeState: return "SubscribeState";
    case MessageType::SafetyReconfig: return "SafetyReconfig";
    case MessageType::InjectWrench: return "InjectWrench";
    case MessageType::AckError: return "AckError";
  }
  return "Unknown";
}

std::vector<std::uint8_t> encode_frame(std::uint8_t msg_type, std::uint16_t robot_id,
                                       std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxPayload) {
    throw WireException(WireError::Oversize, "payload of " + std::to_string(payload.size()) + " bytes");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + payload.size() + kCrcSize);
  ByteWriter w(out);
  w.bytes(kMagic);
  w.u8(kProtocolVersion);
  w.u8(msg_type);
  w.u16(robot_id);
  w.u32(static_cast<std::uint32_t>(payload.size()));
  w.bytes(payload);
  w.u32(crc32(std::span<const std::uint8_t>(out).subspan(4)));
  return out;
}

namespace {

enum class HeaderCheck { Ok, NeedMore, BadMagic, Oversize };

HeaderCheck check_header(std::span<const std::uint8_t> b, std::uint32_t& payload_len) {
  const std::size_t have = std::min<std::size_t>(b.size(), 5);
  for (std::size_t i = 0; i < have; ++i) {
    const std::uint8_t want = i < 4 ? kMagic[i] : kProtocolVersion;
    if (b[i] != want) return HeaderCheck::BadMagic;
  }
  if (b.size() < kHeaderSize) return HeaderCheck::NeedMore;
  payload_len = ByteReader(b.subspan(8, 4)).u32();
  if (payload_len > kMaxPayload) return HeaderCheck::Oversize;
  return HeaderCheck::Ok;
}

bool crc_ok(std::span<const std::uint8_t> frame) {
  const std::size_t body = frame.size() - kCrcSize;
  return crc32(frame.subspan(4, body - 4)) == ByteReader(frame.subspan(body)).u32();
}

Frame frame_from(std::span<const std::uint8_t> frame, std::uint32_t payload_len) {
  Frame f;
  f.msg_type = frame[5];
  f.robot_id = static_cast<std::uint16_t>(frame[6] | (frame[7] << 8));
  f.payload.assign(frame.begin() + kHeaderSize, frame.begin() + kHeaderSize + payload_len);
  return f;
}

}  // namespace

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  std::uint32_t len = 0;
  switch (check_header(bytes, len)) {
    case HeaderCheck::BadMagic: throw WireException(WireError::BadMagic, "frame does not start with FIFP v1");
    case HeaderCheck::NeedMore: throw WireException(WireError::Truncated, "short header");
    case HeaderCheck::Oversize: throw WireException(WireError::Oversize, "payload_len " + std::to_string(len));
    case HeaderCheck::Ok: break;
  }
  const std::size_t total = kHeaderSize + len + kCrcSize;
  if (bytes.size() < total) throw WireException(WireError::Truncated, "frame body incomplete");
  if (bytes.size() > total) throw WireException(WireError::MalformedBlock, "trailing bytes after frame");
  if (!crc_ok(bytes)) throw WireException(WireError::BadCrc, "checksum mismatch");
  return frame_from(bytes, len);
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (start_ > 0 && start_ >= buf_.size() / 2) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(start_));
    start_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

void FrameDecoder::consume(std::size_t n) { start_ += n; }

// Drops the current leading byte and skips to the next possible magic.
// Returns true if a candidate start (or a partial magic at the tail) remains.
bool FrameDecoder::resync() {
  const auto begin = buf_.begin() + static_cast<std::ptrdiff_t>(start_) + 1;
  auto it = std::find(begin, buf_.end(), kMagic[0]);
  start_ = static_cast<std::size_t>(it - buf_.begin());
  return it != buf_.end();
}

std::optional<DecodeEvent> FrameDecoder::next() {
  while (buffered() > 0) {
    const std::span<const std::uint8_t> view(buf_.data() + start_, buffered());
    std::uint32_t len = 0;
    const HeaderCheck hc = check_header(view, len);
    if (hc == HeaderCheck::NeedMore) return std::nullopt;
    if (hc == HeaderCheck::BadMagic) {
      const bool report = !in_garbage_;
      in_garbage_ = true;
      resync();
      if (report) return DecodeEvent{WireError::BadMagic};
      continue;
    }
    if (hc == HeaderCheck::Oversize) {
      in_garbage_ = true;
      resync();
      return DecodeEvent{WireError::Oversize};
    }
    const std::size_t total = kHeaderSize + len + kCrcSize;
    if (view.size() < total) return std::nullopt;
    const auto frame = view.first(total);
    if (!crc_ok(frame)) {
      in_garbage_ = true;
      resync();
      return DecodeEvent{WireError::BadCrc};
    }
    in_garbage_ = false;
    Frame f = frame_from(frame, len);
    consume(total);
    return DecodeEvent{std::move(f)};
  }
  return std::nullopt;
}

std::optional<DecodeEvent> FrameDecoder::finish() {
  if (auto e = next()) return e;
  if (buffered() == 0) return std::nullopt;
  start_ = buf_.size();
  return DecodeEvent{WireError::Truncated};
}

}  // namespace skillstack::wire
