// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skillstack/types.hpp"

namespace skillstack::wire {

enum class WireError : std::uint8_t {
  BadMagic,
  BadCrc,
  Oversize,
  Truncated,
  UnknownVariant,
  MalformedBlock,
  EncodeNonFinite,
};

std::string_view to_string(WireError e);

class WireException : public std::runtime_error {
 public:
  WireException(WireError kind, const std::string& what);
  WireError kind() const { return kind_; }

 private:
  WireError kind_;
};

// Little-endian appender.
class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void string(std::string_view s);
  // u32 count followed by the values.
  template <typename Derived>
  void array(const Eigen::MatrixBase<Derived>& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  void pose(const Pose& p);

  std::size_t size() const { return out_.size(); }
  void patch_u32(std::size_t offset, std::uint32_t v);

 private:
  std::vector<std::uint8_t>& out_;
};

// Bounds-checked little-endian reader. Running past the end throws
// WireException(MalformedBlock).
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::string string();
  std::span<const std::uint8_t> take(std::size_t n);
  ByteReader sub(std::size_t n) { return ByteReader(take(n)); }

  // Reads a length-prefixed array that must hold exactly N values.
  template <int N>
  Eigen::Matrix<double, N, 1> fixed_array() {
    const std::uint32_t n = u32();
    if (n != static_cast<std::uint32_t>(N)) {
      throw WireException(WireError::MalformedBlock,
                          "expected array of " + std::to_string(N) + ", got " + std::to_string(n));
    }
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) v(i) = f64();
    return v;
  }
  Pose pose();

  std::size_t remaining() const { return data_.size() - pos_; }
  bool empty() const { return remaining() == 0; }
  // Throws MalformedBlock unless every byte was consumed.
  void expect_end(std::string_view what) const;

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace skillstack::wire
