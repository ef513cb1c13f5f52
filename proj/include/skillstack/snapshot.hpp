// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>

#include "skillstack/wire/messages.hpp"

namespace skillstack::core {

class NotStarted : public std::runtime_error {
 public:
  NotStarted() : std::runtime_error("control loop has not published a state yet") {}
};

// Single-writer seqlock over an encoded state record.
// 
// The payload is stored as relaxed atomic words, so concurrent access is
// race-free; the sequence number tells readers whether the words they saw
// belong to one write. Odd sequence = write in progress.
class StateSnapshot {
 public:
  static constexpr std::size_t kWords = wire::kStateRecordSize / 8;

  void publish(const wire::StateRecord& rec) {
    std::array<std::uint64_t, kWords> words;
    std::memcpy(words.data(), rec.data(), rec.size());
    const std::uint64_t s = seq_.load(std::memory_order_relaxed);
    seq_.store(s + 1, std::memory_order_relaxed);
    std::atomic_thread_fence(std::memory_order_release);
    for (std::size_t i = 0; i < kWords; ++i) words_[i].store(words[i], std::memory_order_relaxed);
    seq_.store(s + 2, std::memory_order_release);
  }

  // Latest complete record and its sequence number; nullopt before the
  // first publish. Retries on torn reads, never blocks the writer.
  std::optional<std::pair<wire::StateRecord, std::uint64_t>> try_read(std::uint64_t* retries = nullptr) const {
    std::array<std::uint64_t, kWords> words;
    for (;;) {
      const std::uint64_t s1 = seq_.load(std::memory_order_acquire);
      if (s1 == 0) return std::nullopt;
      if (s1 & 1U) {
        if (retries) ++*retries;
        continue;
      }
      for (std::size_t i = 0; i < kWords; ++i) words[i] = words_[i].load(std::memory_order_relaxed);
      std::atomic_thread_fence(std::memory_order_acquire);
      if (seq_.load(std::memory_order_relaxed) == s1) {
        wire::StateRecord rec;
        std::memcpy(rec.data(), words.data(), rec.size());
        return std::make_pair(rec, s1);
      }
      if (retries) ++*retries;
    }
  }

  // Throws NotStarted before the first publish.
  RobotState read() const {
    auto r = try_read();
    if (!r) throw NotStarted();
    return wire::decode_state_record(r->first);
  }

  std::uint64_t sequence() const { return seq_.load(std::memory_order_acquire); }

 private:
  std::atomic<std::uint64_t> seq_{0};
  std::array<std::atomic<std::uint64_t>, kWords> words_{};
};

}  // namespace skillstack::core
