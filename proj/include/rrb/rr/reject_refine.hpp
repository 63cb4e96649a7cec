#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rrb/core/bandit.hpp"
#include "rrb/core/interval_set.hpp"
#include "rrb/core/rng.hpp"

namespace rrb::rr {

struct RRConfig {
  /// Target resolution; must be 2^-D for an integer D >= 1.
  double epsilon = 1.0 / 32.0;
  /// Confidence parameter. Values >= 1 are accepted as a raw inflation knob
  /// and void the PAC guarantee.
  double delta = 0.1;
  double lipschitz = 1.0;
  /// Optional cap on the number of rounds.
  std::optional<int> max_depth;
  /// Stop after round 1 unless it looks able to beat a supplied incumbent.
  bool early_stop_depth1 = false;
  /// Worker threads for sampling the arms of one round. Results do not
  /// depend on this value.
  unsigned threads = 1;

  void validate() const;
  /// D = log2(1 / epsilon).
  int depth() const;
  /// min(D, max_depth).
  int rounds() const;
};

struct ArmEstimate {
  double location;
  std::uint64_t pulls;
  double empirical_mean;
  double ci_halfwidth;
  int round;
};

struct RoundBest {
  int round;
  double location;
  double empirical_mean;
};

struct RRState {
  int round = 1;
  IntervalSet surviving = IntervalSet::unit();
  std::vector<ArmEstimate> estimates;
  std::vector<RoundBest> best_per_round;
  std::uint64_t total_samples = 0;
};

/// One row of the per-round trace.
struct RoundTrace {
  int round;
  std::size_t arms_sampled;
  std::uint64_t pulls_per_arm;
  double surviving_measure;
  double best_location;
  double best_mean;
  std::uint64_t cumulative_samples;
};

/// ceil(L) * 2^(t+3) grid points (2k - 1) / (ceil(L) * 2^(t+4)), ascending.
std::vector<double> grid_points(int t, double lipschitz);

/// CI half-width 2^-(t+4) used in round t.
double ci_halfwidth(int t);

/// Empirical gap above the round minimum that triggers exclusion: 12 / 2^(t+4).
double exclusion_threshold(int t);

/// Pulls per arm for a symmetric CI of half-width 2^-(t+4) at level
/// 1 - delta / (2^t n_arms) under 1-sub-Gaussian noise; at least one.
std::uint64_t samples_per_arm(int t, double delta, std::uint64_t n_arms);

/// Grid points of round state.round that lie in the surviving region.
std::vector<double> active_arms(const RRState& state, const RRConfig& cfg);

/// Samples the next round would consume.
std::uint64_t round_cost(const RRState& state, const RRConfig& cfg);

/// Samples every active arm, picks the round minimizer, and removes the
/// neighbourhood of every clearly worse arm from the surviving region.
///
/// Arm k of round t draws from rng.child(t).child(k). Throws NoActiveArms when
/// the surviving region holds no grid point.
RRState run_round(const RRState& state, const Bandit& bandit, const RRConfig& cfg, const Rng& rng);

/// Whether a depth-1 round leaves room to beat the incumbent: the best lower
/// confidence bound must sit more than one CI width below it.
bool depth1_promising(const RRState& after_round1, double incumbent);

struct RunResult {
  double recommendation;
  double recommendation_mean;
  RRState state;
  std::vector<RoundTrace> trace;
  /// Estimates of every arm probed across all rounds.
  std::vector<ArmEstimate> probed;
  bool budget_exhausted = false;
  bool stopped_early = false;
};

/// Runs rounds 1..min(D, max_depth) and recommends the round minimizer with
/// the smallest empirical mean.
///
/// When a budget is given each round is charged before it runs; a round that
/// does not fit ends the run with budget_exhausted set. If round 1 itself does
/// not fit, BudgetExhausted is thrown.
RunResult run(const Bandit& bandit, const RRConfig& cfg, const Rng& rng,
              SampleBudget* budget = nullptr, std::optional<double> incumbent = std::nullopt);

void write_trace_csv(std::ostream& out, std::span<const RoundTrace> trace, bool header = true);

}  // namespace rrb::rr
