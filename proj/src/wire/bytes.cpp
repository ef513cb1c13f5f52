// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/wire/bytes.hpp"

#include <bit>

namespace skillstack::wire {

std::string_view to_string(WireError e) {
  switch (e) {
    case WireError::BadMagic: return "BadMagic";
    case WireError::BadCrc: return "BadCrc";
    case WireError::Oversize: return "Oversize";
    case WireError::Truncated: return "Truncated";
    case WireError::UnknownVariant: return "UnknownVariant";
    case WireError::MalformedBlock: return "MalformedBlock";
    case WireError::EncodeNonFinite: return "EncodeNonFinite";
  }
  return "Unknown";
}

WireException::WireException(WireError kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void ByteWriter::u16(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v));
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::string(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
}

void ByteWriter::pose(const Pose& p) {
  array(p.position());
  const Eigen::Quaterniond& q = p.orientation();
  array(Eigen::Vector4d(q.w(), q.x(), q.y(), q.z()));
}

void ByteWriter::patch_u32(std::size_t offset, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_[offset + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::span<const std::uint8_t> ByteReader::take(std::size_t n) {
  if (n > remaining()) {
    throw WireException(WireError::MalformedBlock,
                        "need " + std::to_string(n) + " bytes, " + std::to_string(remaining()) + " left");
  }
  auto s = data_.subspan(pos_, n);
  pos_ += n;
  return s;
}

std::uint8_t ByteReader::u8() { return take(1)[0]; }

std::uint16_t ByteReader::u16() {
  auto b = take(2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t ByteReader::u32() {
  auto b = take(4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t ByteReader::u64() {
  auto b = take(8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::string ByteReader::string() {
  const std::uint32_t n = u32();
  auto b = take(n);
  return std::string(b.begin(), b.end());
}

Pose ByteReader::pose() {
  const Eigen::Vector3d p = fixed_array<3>();
  const Eigen::Vector4d q = fixed_array<4>();
  try {
    return Pose::from_wxyz(p, q[0], q[1], q[2], q[3]);
  } catch (const std::invalid_argument& e) {
    throw WireException(WireError::MalformedBlock, e.what());
  }
}

void ByteReader::expect_end(std::string_view what) const {
  if (!empty()) {
    throw WireException(WireError::MalformedBlock,
                        std::to_string(remaining()) + " trailing bytes in " + std::string(what));
  }
}

}  // namespace skillstack::wire
