#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rrb/core/bandit.hpp"
#include "rrb/core/trace.hpp"
#include "rrb/line/slice.hpp"
#include "rrb/rr/reject_refine.hpp"

namespace rrb::line {

enum class Policy { rr_powell, reject, aim };

/// How the reject policy turns a line result into an acceptance probability.
enum class AcceptanceRule {
  /// min(1, exp(-q (g(s_hat) - g(0)))), compares objective values.
  value_difference,
  /// min(1, exp(-q (s_hat_k - s_hat_{k-1}))), compares accepted step lengths.
  location_difference,
};

struct DriverConfig {
  /// Acceptance temperature of the reject policy.
  double q = 400.0;
  int d_max = 1;
  double delta = 20.0;
  /// Base Lipschitz constant; a line along u uses lipschitz * |u|.
  double lipschitz = 0.5;
  Policy policy = Policy::rr_powell;
  AcceptanceRule acceptance = AcceptanceRule::value_difference;
  double epsilon_line = 1.0 / 256.0;
  std::uint64_t budget = 10'000'000;
  /// Cap on the number of line searches.
  std::uint64_t max_steps = std::numeric_limits<std::uint64_t>::max();
  Wrap wrap = Wrap::periodic;
  bool early_stop_depth1 = true;
  unsigned threads = 1;

  void validate() const;
  rr::RRConfig line_config(double direction_norm) const;
};

struct LineSearchResult {
  /// Minimizer over the probed grid points and the incumbent at s = 0.
  double s_hat = 0.0;
  double g_hat = 0.0;
  /// Minimizer over the probed grid points alone.
  double best_probed_s = 0.0;
  double best_probed_value = std::numeric_limits<double>::infinity();
  std::uint64_t samples_used = 0;
  bool budget_exhausted = false;
  std::vector<rr::ArmEstimate> probed;
};

/// Depth-capped RR along one slice. The incumbent value g(0) is reused, not
/// resampled. When the budget cannot cover round 1, nothing is sampled and
/// budget_exhausted is set.
LineSearchResult rr_line_search(const Bandit& bandit, const LinearSlice& slice,
                                const DriverConfig& cfg, double incumbent_value, const Rng& rng,
                                SampleBudget& budget);

/// Uniform direction on the unit sphere.
Point random_unit_vector(std::size_t dimension, Rng& rng);

/// Powell direction-set method with rr_line_search as the 1-d minimizer.
/// Requires dimension >= 2.
OptimizeResult powell_driver(const Bandit& bandit, const Point& start, const DriverConfig& cfg,
                             const Rng& rng, const StepCallback& on_step = {});

/// Random-direction line searches under the reject or AIm acceptance policy.
OptimizeResult random_direction_driver(const Bandit& bandit, const Point& start,
                                       const DriverConfig& cfg, const Rng& rng,
                                       const StepCallback& on_step = {});

/// Dispatches on cfg.policy.
OptimizeResult run_driver(const Bandit& bandit, const Point& start, const DriverConfig& cfg,
                          const Rng& rng, const StepCallback& on_step = {});

}  // namespace rrb::line
