// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/log_format.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

namespace skillstack::log {

std::vector<std::uint8_t> encode_header(std::uint16_t robot_id) {
  std::vector<std::uint8_t> out;
  wire::ByteWriter w(out);
  w.bytes(kMagic);
  w.u16(kVersion);
  w.u16(static_cast<std::uint16_t>(kRecordSize));
  w.u16(robot_id);
  w.u16(0);
  return out;
}

LogFile parse_log(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw LogFormatError("bad magic: not a FILG log");
  }
  wire::ByteReader r(bytes.subspan(4, kHeaderSize - 4));
  const std::uint16_t version = r.u16();
  const std::uint16_t record_size = r.u16();
  LogFile f;
  f.robot_id = r.u16();
  if (version != kVersion) throw LogFormatError("unsupported log version " + std::to_string(version));
  if (record_size != kRecordSize) throw LogFormatError("unexpected record size " + std::to_string(record_size));
  const auto body = bytes.subspan(kHeaderSize);
  const std::size_t n = body.size() / kRecordSize;
  f.trailing_bytes = body.size() % kRecordSize;
  f.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      f.records.push_back(wire::decode_state_record(body.subspan(i * kRecordSize, kRecordSize)));
    } catch (const wire::WireException& e) {
      throw LogFormatError("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return f;
}

LogFile read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogFormatError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_log(bytes);
}

void LogBuffer::append(const wire::StateRecord& record) {
  const std::uint64_t n = count_.load(std::memory_order_relaxed);
  const std::size_t slot = n % kChunkRecords;
  if (slot == 0) {
    auto chunk = std::make_unique<Chunk>();
    tail_ = chunk.get();
    const std::lock_guard<std::mutex> lock(chunks_mutex_);
    chunks_.push_back(std::move(chunk));
  }
  tail_->records[slot] = record;
  count_.store(n + 1, std::memory_order_release);
}

std::vector<std::uint8_t> LogBuffer::serialize() const {
  const std::uint64_t n = size();
  std::vector<const Chunk*> chunks;
  {
    const std::lock_guard<std::mutex> lock(chunks_mutex_);
    for (const auto& c : chunks_) chunks.push_back(c.get());
  }
  std::vector<std::uint8_t> out = encode_header(robot_id_);
  out.reserve(kHeaderSize + n * kRecordSize);
  for (std::uint64_t i = 0; i < n; ++i) {
    const wire::StateRecord& rec = chunks[i / kChunkRecords]->records[i % kChunkRecords];
    out.insert(out.end(), rec.begin(), rec.end());
  }
  return out;
}

std::uint64_t LogBuffer::flush(const std::filesystem::path& path) const {
  const std::vector<std::uint8_t> bytes = serialize();
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "open " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::system_error(errno, std::generic_category(), "write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
  return (bytes.size() - kHeaderSize) / kRecordSize;
}

}  // namespace skillstack::log
