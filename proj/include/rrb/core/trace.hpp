#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "rrb/core/bandit.hpp"

namespace rrb {

/// One optimizer step; shared by the line-search drivers and the baselines.
struct StepRecord {
  std::uint64_t step = 0;
  Point direction;
  bool accepted = false;
  /// Empirical objective value of the incumbent after this step.
  double incumbent_value = 0.0;
  std::uint64_t cumulative_samples = 0;
  Point incumbent;
};

enum class StopReason { budget_exhausted, max_steps, callback, converged };

std::string_view to_string(StopReason reason);

/// Called after every step; returning true stops the optimizer.
using StepCallback = std::function<bool(const StepRecord&)>;

struct OptimizeResult {
  Point best_point;
  double best_value = 0.0;
  std::vector<StepRecord> trace;
  std::uint64_t total_samples = 0;
  StopReason stop = StopReason::max_steps;
};

/// CSV columns: step,direction,accepted,incumbent_value,cumulative_samples.
/// Direction components are space separated.
void write_step_csv(std::ostream& out, std::span<const StepRecord> trace, bool header = true);

}  // namespace rrb
