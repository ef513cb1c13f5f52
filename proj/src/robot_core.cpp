// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/robot_core.hpp"

#include <cmath>

namespace skillstack::core {

std::string_view to_string(ClockMode m) { return m == ClockMode::Real ? "real" : "sim"; }

RobotCore::RobotCore(std::shared_ptr<const ArmModel> model, LoopOptions options, ClockMode clock)
    : model_(std::move(model)), loop_(model_, mailbox_, std::move(options)), clock_(clock) {
  loop_.set_terminal_callback([this](std::uint32_t) { in_flight_.fetch_sub(1); });
}

RobotCore::~RobotCore() {
  stop_.store(true);
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    wake_ = true;
  }
  wake_cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void RobotCore::start() {
  if (running_.exchange(true)) return;
  loop_.publish_initial();
  thread_ = std::thread([this] { clock_ == ClockMode::Sim ? run_sim() : run_real(); });
}

void RobotCore::shutdown(std::chrono::milliseconds settle) {
  if (!running_.load()) return;
  PreemptSkill all;
  all.all = true;
  post(all);
  wait_idle(settle);
  stop_.store(true);
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    wake_ = true;
  }
  wake_cv_.notify_all();
  if (thread_.joinable()) thread_.join();
  running_.store(false);
}

bool RobotCore::post(MailboxMessage msg) {
  if (!mailbox_.post(std::move(msg))) return false;
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    wake_ = true;
  }
  wake_cv_.notify_one();
  return true;
}

SubmitResult RobotCore::submit(skill::SkillSpec spec) {
  SubmitResult r;
  r.violations = skill::validate_skill(spec);
  if (!r.violations.empty()) {
    r.error = SubmitError::Invalid;
    return r;
  }
  int n = in_flight_.load();
  do {
    if (n >= kMaxSkillsInFlight) {
      r.error = SubmitError::Busy;
      return r;
    }
  } while (!in_flight_.compare_exchange_weak(n, n + 1));
  r.skill_id = next_id_.fetch_add(1);
  if (!post(SubmitSkill{r.skill_id, std::move(spec)})) {
    in_flight_.fetch_sub(1);
    r.error = SubmitError::MailboxFull;
  }
  return r;
}

bool RobotCore::preempt(std::uint32_t skill_id) { return post(PreemptSkill{skill_id, false}); }

bool RobotCore::post_sensor(skill::SensorUpdate update) { return post(SensorMessage{std::move(update)}); }

bool RobotCore::inject_wrench(const Wrench& w, double duration) {
  const long long ticks = std::llround(duration * kTicksPerSecond);
  if (!all_finite(w) || !std::isfinite(duration) || ticks <= 0) return false;
  return post(InjectWrench{w, static_cast<std::uint64_t>(ticks)});
}

bool RobotCore::reconfigure_safety(safety::SafetyConfig cfg) {
  if (safety::config_error(cfg)) return false;
  return post(SafetyReconfig{std::move(cfg)});
}

bool RobotCore::wait_idle(std::chrono::milliseconds timeout) {
  std::unique_lock<std::mutex> lock(mutex_);
  return idle_cv_.wait_for(lock, timeout, [&] {
    return !running_.load() || stop_.load() || (idle_ && !ticking_ && mailbox_.empty());
  });
}

void RobotCore::after_tick() {
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    ticking_ = false;
    idle_ = loop_.quiescent();
  }
  idle_cv_.notify_all();
}

void RobotCore::run_sim() {
  std::uint64_t tick = loop_.state().tick;
  for (;;) {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      wake_cv_.wait(lock, [&] { return stop_.load() || wake_ || !loop_.quiescent(); });
      wake_ = false;
      if (stop_.load()) break;
      ticking_ = true;  // busy until proven quiescent, so wait_idle cannot slip through
    }
    loop_.service_mailbox();
    if (!loop_.has_work()) {
      after_tick();
      continue;
    }
    // Run straight through while busy; re-check the wait condition only
    // once the work is done so the hot path takes no lock. Messages that
    // land after the last skill ends are serviced without a tick, so when
    // they arrive never changes the log.
    do {
      loop_.tick(tick * 1'000'000ULL);
      ++tick;
    } while (loop_.has_work() && !stop_.load());
    after_tick();
  }
  after_tick();
}

void RobotCore::record_tick_times(std::size_t capacity) {
  tick_times_.assign(capacity, 0);
  tick_times_count_.store(0);
}

std::vector<std::int64_t> RobotCore::tick_times() const {
  const std::size_t n = tick_times_count_.load(std::memory_order_acquire);
  return std::vector<std::int64_t>(tick_times_.begin(), tick_times_.begin() + static_cast<std::ptrdiff_t>(n));
}

void RobotCore::run_real() {
  using clock = std::chrono::steady_clock;
  constexpr auto period = std::chrono::microseconds(1000);
  const auto t0 = clock::now();
  auto deadline = t0;
  while (!stop_.load(std::memory_order_relaxed)) {
    std::this_thread::sleep_until(deadline);
    const auto now = clock::now();
    if (now - deadline > period / 2) missed_.fetch_add(1, std::memory_order_relaxed);
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(now - t0).count();
    const std::size_t n = tick_times_count_.load(std::memory_order_relaxed);
    if (n < tick_times_.size()) {
      tick_times_[n] = ns;
      tick_times_count_.store(n + 1, std::memory_order_release);
    }
    {
      const std::lock_guard<std::mutex> lock(mutex_);
      ticking_ = true;
    }
    loop_.tick(static_cast<std::uint64_t>(ns));
    after_tick();
    deadline += period;
    // More than a full period behind: re-anchor instead of bursting to catch up.
    if (clock::now() > deadline + period) deadline = clock::now();
  }
  after_tick();
}

}  // namespace skillstack::core
