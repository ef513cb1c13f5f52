// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "skillstack/robot_core.hpp"
#include "skillstack/skill_builders.hpp"

namespace skillstack::bench {

BenchReport summarize(const std::vector<std::int64_t>& t, std::uint64_t missed) {
  BenchReport r;
  r.missed = missed;
  r.ticks = t.size();
  if (t.size() < 2) return r;
  std::vector<double> periods;
  periods.reserve(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) periods.push_back(static_cast<double>(t[i] - t[i - 1]) / 1000.0);
  r.mean_us = std::accumulate(periods.begin(), periods.end(), 0.0) / static_cast<double>(periods.size());
  std::sort(periods.begin(), periods.end());
  auto pct = [&](double p) {
    const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(periods.size()))) - 1;
    return periods[std::min(idx, periods.size() - 1)];
  };
  r.median_us = pct(0.5);
  r.p99_us = pct(0.99);
  r.max_us = periods.back();
  return r;
}

BenchReport run_loop_bench(std::shared_ptr<const ArmModel> model, double duration_s, BenchLoad load) {
  core::RobotCore robot(model, core::LoopOptions{}, core::ClockMode::Real);
  const auto expected = static_cast<std::size_t>(duration_s * kTicksPerSecond);
  robot.record_tick_times(expected + expected / 2 + 1000);
  robot.start();
  const RobotState s = robot.read_state();
  const skill::SkillSpec spec = load == BenchLoad::Hold ? skill::hold(duration_s + 1.0)
                                                        : skill::go_to_pose(s.ee_pose, duration_s + 1.0, true);
  robot.submit(spec);
  std::this_thread::sleep_for(std::chrono::duration<double>(duration_s));
  robot.shutdown();
  return summarize(robot.tick_times(), robot.missed_deadlines());
}

std::string format_report(const BenchReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "ticks:      %llu\n"
                "mean:       %.1f us\n"
                "median:     %.1f us\n"
                "p99:        %.1f us\n"
                "max:        %.1f us\n"
                "missed:     %llu\n"
                "BENCH mean_us=%.1f median_us=%.1f p99_us=%.1f max_us=%.1f missed=%llu ticks=%llu\n",
                static_cast<unsigned long long>(r.ticks), r.mean_us, r.median_us, r.p99_us, r.max_us,
                static_cast<unsigned long long>(r.missed), r.mean_us, r.median_us, r.p99_us, r.max_us,
                static_cast<unsigned long long>(r.missed), static_cast<unsigned long long>(r.ticks));
  return buf;
}

}  // namespace skillstack::bench
