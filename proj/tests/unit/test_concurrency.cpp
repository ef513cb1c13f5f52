// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <cstring>
#include <thread>
#include <vector>

#include "skillstack/mailbox.hpp"
#include "skillstack/snapshot.hpp"

namespace skillstack::core {
namespace {

using Clock = std::chrono::steady_clock;

TEST(SpscRing, PreservesOrderAndReportsFull) {
  SpscRing<int, 4> r;
  EXPECT_TRUE(r.empty());
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(r.push(i));
  EXPECT_FALSE(r.push(99));
  for (int i = 0; i < 4; ++i) EXPECT_EQ(r.pop(), i);
  EXPECT_FALSE(r.pop());
}

TEST(SpscRing, CrossThreadTransferIsLossless) {
  SpscRing<std::uint64_t, 64> r;
  constexpr std::uint64_t kCount = 200000;
  std::thread producer([&] {
    for (std::uint64_t i = 0; i < kCount;) {
      if (r.push(i)) {
        ++i;
      } else {
        std::this_thread::yield();
      }
    }
  });
  std::uint64_t expected = 0;
  while (expected < kCount) {
    if (auto v = r.pop()) {
      ASSERT_EQ(*v, expected);
      ++expected;
    } else {
      std::this_thread::yield();
    }
  }
  producer.join();
}

TEST(CommandMailbox, BoundedWithPerProducerOrder) {
  CommandMailbox mb;
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < kMailboxCapacity + 10; ++i) accepted += mb.post(PreemptSkill{static_cast<std::uint32_t>(i)});
  EXPECT_EQ(accepted, kMailboxCapacity);
  EXPECT_EQ(mb.size(), kMailboxCapacity);
  while (mb.take()) {
  }

  constexpr int kProducers = 4, kPerProducer = 5000;
  std::vector<std::thread> producers;
  for (int p = 0; p < kProducers; ++p) {
    producers.emplace_back([&mb, p] {
      for (int i = 0; i < kPerProducer;) {
        if (mb.post(PreemptSkill{static_cast<std::uint32_t>(p * 100000 + i)})) {
          ++i;
        } else {
          std::this_thread::yield();
        }
      }
    });
  }
  std::vector<int> next(kProducers, 0);
  int received = 0;
  while (received < kProducers * kPerProducer) {
    if (auto m = mb.take()) {
      const std::uint32_t v = std::get<PreemptSkill>(*m).skill_id;
      const int p = static_cast<int>(v / 100000), i = static_cast<int>(v % 100000);
      ASSERT_EQ(i, next[p]);
      ++next[p];
      ++received;
    } else {
      std::this_thread::yield();
    }
  }
  for (auto& t : producers) t.join();
}

// Every f64 slot of record `k` holds k, so a torn read mixes values.
wire::StateRecord patterned(std::uint64_t k) {
  wire::StateRecord r;
  for (std::size_t off = 0; off + 8 <= r.size(); off += 8) std::memcpy(r.data() + off, &k, 8);
  return r;
}

bool consistent(const wire::StateRecord& r) {
  std::uint64_t first;
  std::memcpy(&first, r.data(), 8);
  for (std::size_t off = 8; off + 8 <= r.size(); off += 8) {
    std::uint64_t v;
    std::memcpy(&v, r.data() + off, 8);
    if (v != first) return false;
  }
  return true;
}

struct StressResult {
  std::uint64_t reads = 0;
  std::uint64_t torn = 0;
  std::uint64_t retries = 0;
  std::uint64_t published = 0;
  double max_period_us = 0.0;
};

StressResult snapshot_stress(std::chrono::milliseconds duration, bool paced) {
  StateSnapshot snap;
  std::atomic<bool> stop{false};
  std::atomic<std::uint64_t> reads{0}, torn{0}, retries{0};
  std::vector<std::thread> readers;
  for (int i = 0; i < 4; ++i) {
    readers.emplace_back([&] {
      std::uint64_t local_reads = 0, local_torn = 0, local_retries = 0, last = 0;
      while (!stop.load(std::memory_order_relaxed)) {
        if (auto r = snap.try_read(&local_retries)) {
          ++local_reads;
          std::uint64_t k;
          std::memcpy(&k, r->first.data(), 8);
          if (!consistent(r->first) || k < last) ++local_torn;
          last = k;
        }
        if (paced) std::this_thread::yield();
      }
      reads += local_reads;
      torn += local_torn;
      retries += local_retries;
    });
  }
  StressResult res;
  const auto start = Clock::now();
  auto deadline = start;
  auto prev = start;
  std::uint64_t k = 1;
  while (Clock::now() - start < duration) {
    if (paced) {
      deadline += std::chrono::microseconds(1000);
      std::this_thread::sleep_until(deadline);
      const auto now = Clock::now();
      res.max_period_us = std::max(res.max_period_us, std::chrono::duration<double, std::micro>(now - prev).count());
      prev = now;
    }
    snap.publish(patterned(k++));
  }
  stop = true;
  for (auto& t : readers) t.join();
  res.reads = reads;
  res.torn = torn;
  res.retries = retries;
  res.published = k - 1;
  return res;
}

TEST(StateSnapshot, NotStartedBeforeFirstPublish) {
  StateSnapshot s;
  EXPECT_FALSE(s.try_read());
  EXPECT_THROW(s.read(), NotStarted);
  s.publish(wire::encode_state_record(RobotState{}));
  EXPECT_EQ(s.read(), RobotState{});
  EXPECT_EQ(s.sequence(), 2U);
}

TEST(StateSnapshot, UnpacedWriterNeverProducesTornReads) {
  const StressResult r = snapshot_stress(std::chrono::milliseconds(1500), false);
  EXPECT_EQ(r.torn, 0U);
  EXPECT_GT(r.reads, 1000U);
  EXPECT_GT(r.published, 1000U);
}

TEST(StateSnapshot, FourReadersAgainstOneKilohertzWriterForTenSeconds) {
  const StressResult r = snapshot_stress(std::chrono::seconds(10), true);
  EXPECT_EQ(r.torn, 0U);
  EXPECT_GT(r.reads, 10000U);
  // Cadence: roughly one publish per millisecond despite the readers.
  EXPECT_GT(r.published, 9000U);
  EXPECT_LT(r.published, 10100U);
  std::printf("snapshot stress: %llu reads, %llu retries, %llu publishes, max writer period %.0f us\n",
              static_cast<unsigned long long>(r.reads), static_cast<unsigned long long>(r.retries),
              static_cast<unsigned long long>(r.published), r.max_period_us);
}

}  // namespace
}  // namespace skillstack::core
