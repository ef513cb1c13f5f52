// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "skillstack/wire/messages.hpp"

namespace skillstack::log {

// File header: "FILG" | version u16 | record_size u16 | robot_id u16 | reserved u16,
// followed by packed state records.
constexpr std::uint8_t kMagic[4] = {'F', 'I', 'L', 'G'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderSize = 12;
constexpr std::size_t kRecordSize = wire::kStateRecordSize;

class LogFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode_header(std::uint16_t robot_id);

struct LogFile {
  std::uint16_t robot_id = 0;
  std::vector<RobotState> records;
  // Bytes after the last whole record; nonzero means the file was cut short.
  std::size_t trailing_bytes = 0;
  bool truncated() const { return trailing_bytes != 0; }
};

// Throws LogFormatError on a bad header (magic, version, record size).
LogFile parse_log(std::span<const std::uint8_t> bytes);
LogFile read_log(const std::filesystem::path& path);

// Append-only record store written by the control loop and read by anyone.
// 
// Records live in fixed-size chunks that are never moved, so a reader can
// copy everything below the published count while the loop keeps appending.
// The loop only takes the mutex when it starts a new chunk.
class LogBuffer {
 public:
  static constexpr std::size_t kChunkRecords = 4096;

  explicit LogBuffer(std::uint16_t robot_id = 0) : robot_id_(robot_id) {}

  void append(const wire::StateRecord& record);
  std::uint64_t size() const { return count_.load(std::memory_order_acquire); }
  std::uint16_t robot_id() const { return robot_id_; }

  // Header plus all records published so far.
  std::vector<std::uint8_t> serialize() const;
  // Writes serialize() to `path` atomically (temp file + rename). Returns the record count.
  std::uint64_t flush(const std::filesystem::path& path) const;

 private:
  struct Chunk {
    std::array<wire::StateRecord, kChunkRecords> records;
  };

  std::uint16_t robot_id_;
  mutable std::mutex chunks_mutex_;
  std::vector<std::unique_ptr<Chunk>> chunks_;
  Chunk* tail_ = nullptr;
  std::atomic<std::uint64_t> count_{0};
};

}  // namespace skillstack::log
