// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "skillstack/control_loop.hpp"

namespace skillstack::core {

enum class ClockMode { Real, Sim };
std::string_view to_string(ClockMode m);

enum class SubmitError { None, Busy, Invalid, MailboxFull };

struct SubmitResult {
  std::uint32_t skill_id = 0;
  SubmitError error = SubmitError::None;
  std::vector<std::string> violations;
  bool ok() const { return error == SubmitError::None; }
};

// At most one active and one queued skill per robot.
constexpr int kMaxSkillsInFlight = 2;

// One robot: mailbox, control loop and the thread that paces it.
// 
// Real clock: ticks are paced against a steady clock at 1 kHz.
// Sim clock: ticks run back to back while there is work and the loop parks
// when quiescent, so time only advances while something is happening and
// every run of the same message trace produces the same log.
class RobotCore {
 public:
  RobotCore(std::shared_ptr<const ArmModel> model, LoopOptions options, ClockMode clock);
  ~RobotCore();
  RobotCore(const RobotCore&) = delete;
  RobotCore& operator=(const RobotCore&) = delete;

  void start();
  // Preempts any skill, waits for the loop to settle (bounded), then joins.
  void shutdown(std::chrono::milliseconds settle = std::chrono::milliseconds(2000));
  bool running() const { return running_.load(); }

  SubmitResult submit(skill::SkillSpec spec);
  bool preempt(std::uint32_t skill_id = 0);
  bool post_sensor(skill::SensorUpdate update);
  // Returns false when the duration rounds to zero ticks or the mailbox is full.
  bool inject_wrench(const Wrench& w, double duration);
  bool reconfigure_safety(safety::SafetyConfig cfg);

  // Throws NotStarted before start().
  RobotState read_state() const { return loop_.snapshot().read(); }

  // Blocks until the loop is quiescent with nothing left in the mailbox.
  bool wait_idle(std::chrono::milliseconds timeout = std::chrono::milliseconds(120000));

  // Writes the log collected so far; returns the record count.
  std::uint64_t flush_log(const std::filesystem::path& path) const { return loop_.log().flush(path); }

  ControlLoop& loop() { return loop_; }
  const ControlLoop& loop() const { return loop_; }
  std::uint16_t robot_id() const { return loop_.robot_id(); }
  ClockMode clock() const { return clock_; }

  // Real clock only: tick start times (ns since start) are recorded into a
  // preallocated buffer of `capacity` entries.
  void record_tick_times(std::size_t capacity);
  std::vector<std::int64_t> tick_times() const;
  // Ticks that started more than half a period after their deadline.
  std::uint64_t missed_deadlines() const { return missed_.load(); }

 private:
  void run_sim();
  void run_real();
  bool post(MailboxMessage msg);
  void after_tick();

  std::shared_ptr<const ArmModel> model_;
  CommandMailbox mailbox_;
  ControlLoop loop_;
  ClockMode clock_;
  std::thread thread_;
  std::atomic<bool> running_{false};
  std::atomic<bool> stop_{false};
  std::atomic<int> in_flight_{0};
  std::atomic<std::uint32_t> next_id_{1};

  mutable std::mutex mutex_;
  std::condition_variable wake_cv_;
  std::condition_variable idle_cv_;
  bool wake_ = false;
  bool idle_ = true;
  bool ticking_ = false;

  std::vector<std::int64_t> tick_times_;
  std::atomic<std::size_t> tick_times_count_{0};
  std::atomic<std::uint64_t> missed_{0};
};

}  // namespace skillstack::core
