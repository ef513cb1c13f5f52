// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "skillstack/arm_model.hpp"

namespace skillstack::bench {

struct BenchReport {
  std::uint64_t ticks = 0;
  double mean_us = 0.0;
  double median_us = 0.0;
  double p99_us = 0.0;
  double max_us = 0.0;
  std::uint64_t missed = 0;
};

enum class BenchLoad { Hold, Impedance };

// Statistics over consecutive tick start times (ns).
BenchReport summarize(const std::vector<std::int64_t>& tick_start_ns, std::uint64_t missed);

// Runs one real-clock robot for `duration_s` under the given skill and
// measures tick periods.
BenchReport run_loop_bench(std::shared_ptr<const ArmModel> model, double duration_s, BenchLoad load = BenchLoad::Hold);

// Human-readable lines followed by `BENCH mean_us=... p99_us=... missed=...`.
std::string format_report(const BenchReport& r);

}  // namespace skillstack::bench
