// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "skillstack/log_format.hpp"
#include "skillstack/mailbox.hpp"
#include "skillstack/safety.hpp"
#include "skillstack/sim_robot.hpp"
#include "skillstack/skill_runner.hpp"
#include "skillstack/snapshot.hpp"
#include "skillstack/wire/messages.hpp"

namespace skillstack::core {

// Every skill is cut off after this long regardless of its terminator.
constexpr double kDefaultSkillCap = 60.0;

struct LoopOptions {
  std::uint16_t robot_id = 0;
  safety::SafetyConfig safety;
  std::optional<JointVector> q0;
  std::uint64_t skill_cap_ticks = static_cast<std::uint64_t>(kDefaultSkillCap * kTicksPerSecond);
};

// What the loop did in one tick, for tests and instrumentation.
struct TickInfo {
  std::uint64_t tick = 0;
  bool commanded = false;
  ControlMode mode = ControlMode::JointPositionJointImpedance;
  // Joint reference tracked by the robot's internal controller, or the
  // measured q in torque mode.
  JointVector reference_q = JointVector::Zero();
  std::optional<std::uint32_t> skill_id;
  LimitFlags limits;
};

struct LoopCounters {
  std::uint64_t dropped_sensor = 0;
  std::uint64_t dropped_state = 0;
  std::uint64_t ignored_preempt = 0;
  std::uint64_t limit_clamps = 0;
};

// The per-robot 1 kHz loop body. Owns the simulated robot; the only inputs
// are the mailbox and the tick call, so in sim-clock mode its behavior is a
// pure function of the message trace.
class ControlLoop {
 public:
  ControlLoop(std::shared_ptr<const ArmModel> model, CommandMailbox& mailbox, LoopOptions options = {});

  // Executes one control period. `wall_ns` is stamped into the log record.
  TickInfo tick(std::uint64_t wall_ns);

  // Handles mailbox messages without stepping the robot. The sim clock uses
  // this while parked so that bookkeeping messages (preempt of nothing,
  // safety reconfig, stray sensor data) do not advance time.
  void service_mailbox();

  // Makes the initial state readable before the first tick.
  void publish_initial();

  // No active or queued skill, no pending injection, empty mailbox. A
  // quiescent robot only holds, so a sim clock may pause here.
  bool quiescent() const;
  // Something that needs the robot to be stepped: a skill or an injection.
  bool has_work() const;

  const RobotState& state() const { return sim_.state(); }
  const ArmModel& model() const { return *model_; }
  const safety::SafetyConfig& safety_config() const { return safety_; }
  std::uint16_t robot_id() const { return options_.robot_id; }
  bool has_active_skill() const { return active_.has_value(); }

  const log::LogBuffer& log() const { return log_; }
  const StateSnapshot& snapshot() const { return snapshot_; }
  LoopCounters counters() const;

  // Status changes since the last call. Safe from any thread.
  std::vector<wire::SkillStatusMsg> take_status();

  // States with tick % divisor == 0 are queued for publication; 0 disables.
  void set_publish_divisor(std::uint32_t divisor) { publish_divisor_.store(divisor, std::memory_order_relaxed); }
  std::optional<wire::StateRecord> take_published() { return published_.pop(); }

  // Called from the loop thread after new status or state output is queued.
  void set_output_callback(std::function<void()> cb) { on_output_ = std::move(cb); }

  // Invoked whenever a skill reaches a terminal status (frees its admission slot).
  void set_terminal_callback(std::function<void(std::uint32_t)> cb) { on_terminal_ = std::move(cb); }

 private:
  struct Injection {
    Wrench wrench;
    std::uint64_t remaining;
  };

  void drain();
  void handle(MailboxMessage& msg);
  void activate(SubmitSkill submit);
  void finish(skill::TerminationCause cause, const RobotState& final_state);
  void reject(std::uint32_t skill_id, const RobotState& s);
  void emit(wire::SkillStatusMsg msg);

  std::shared_ptr<const ArmModel> model_;
  CommandMailbox& mailbox_;
  LoopOptions options_;
  SimRobot sim_;
  safety::SafetyConfig safety_;

  std::optional<skill::SkillRunner> active_;
  std::optional<SubmitSkill> queued_;
  JointVector hold_q_;
  std::vector<Injection> injections_;
  bool output_pending_ = false;

  log::LogBuffer log_;
  StateSnapshot snapshot_;
  SpscRing<wire::StateRecord, 4096> published_;
  std::atomic<std::uint32_t> publish_divisor_{0};

  mutable std::mutex status_mutex_;
  std::deque<wire::SkillStatusMsg> status_;
  std::atomic<std::uint64_t> dropped_sensor_{0};
  std::atomic<std::uint64_t> dropped_state_{0};
  std::atomic<std::uint64_t> ignored_preempt_{0};
  std::atomic<std::uint64_t> limit_clamps_{0};

  std::function<void()> on_output_;
  std::function<void(std::uint32_t)> on_terminal_;
};

}  // namespace skillstack::core
