// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <variant>

#include "skillstack/safety.hpp"
#include "skillstack/skill_spec.hpp"

namespace skillstack::core {

// Bounded single-producer single-consumer ring. push() and pop() never block.
template <typename T, std::size_t N>
class SpscRing {
  static_assert(N >= 2 && (N & (N - 1)) == 0, "capacity must be a power of two");

 public:
  static constexpr std::size_t capacity() { return N; }

  bool push(T value) {
    const std::size_t tail = tail_.load(std::memory_order_relaxed);
    if (tail - head_.load(std::memory_order_acquire) == N) return false;
    slots_[tail % N] = std::move(value);
    tail_.store(tail + 1, std::memory_order_release);
    return true;
  }

  std::optional<T> pop() {
    const std::size_t head = head_.load(std::memory_order_relaxed);
    if (head == tail_.load(std::memory_order_acquire)) return std::nullopt;
    std::optional<T> out = std::move(slots_[head % N]);
    slots_[head % N].reset();
    head_.store(head + 1, std::memory_order_release);
    return out;
  }

  std::size_t size() const {
    return tail_.load(std::memory_order_acquire) - head_.load(std::memory_order_acquire);
  }
  bool empty() const { return size() == 0; }

 private:
  std::array<std::optional<T>, N> slots_{};
  alignas(64) std::atomic<std::size_t> head_{0};
  alignas(64) std::atomic<std::size_t> tail_{0};
};

struct SubmitSkill {
  std::uint32_t skill_id;
  skill::SkillSpec spec;
};

struct PreemptSkill {
  // 0 targets the active skill.
  std::uint32_t skill_id = 0;
  // Also drops a queued skill (used on shutdown).
  bool all = false;
};

struct SensorMessage {
  skill::SensorUpdate update;
};

struct InjectWrench {
  Wrench wrench;
  std::uint64_t duration_ticks = 0;
};

struct SafetyReconfig {
  safety::SafetyConfig config;
};

using MailboxMessage = std::variant<SubmitSkill, PreemptSkill, SensorMessage, InjectWrench, SafetyReconfig>;

constexpr std::size_t kMailboxCapacity = 256;
constexpr std::size_t kMaxDrainPerTick = 32;

// Channel from the server front end into one robot's control loop.
// Producers are serialized by a mutex so the ring itself stays SPSC; the
// loop side never locks.
class CommandMailbox {
 public:
  // False when the mailbox is full (backpressure).
  bool post(MailboxMessage msg) {
    const std::lock_guard<std::mutex> lock(producer_mutex_);
    return ring_.push(std::move(msg));
  }

  std::optional<MailboxMessage> take() { return ring_.pop(); }
  bool empty() const { return ring_.empty(); }
  std::size_t size() const { return ring_.size(); }

 private:
  std::mutex producer_mutex_;
  SpscRing<MailboxMessage, kMailboxCapacity> ring_;
};

}  // namespace skillstack::core
