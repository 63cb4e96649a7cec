#include "rrb/rr/reject_refine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>

#include "rrb/core/error.hpp"

namespace rrb::rr {

namespace {

std::uint64_t grid_multiplier(double lipschitz) {
  return static_cast<std::uint64_t>(std::ceil(lipschitz));
}

}  // namespace

void RRConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  int exponent = 0;
  const double mantissa = std::frexp(epsilon, &exponent);
  if (mantissa != 0.5) {
    throw InvalidArgument("epsilon must be a power of two, got " + std::to_string(epsilon));
  }
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (!(lipschitz > 0.0)) throw InvalidArgument("lipschitz must be positive");
  if (max_depth && *max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
}

int RRConfig::depth() const {
  int exponent = 0;
  std::frexp(epsilon, &exponent);
  return 1 - exponent;
}

int RRConfig::rounds() const {
  return max_depth ? std::min(depth(), *max_depth) : depth();
}

std::vector<double> grid_points(int t, double lipschitz) {
  if (t < 1) throw InvalidArgument("grid round must be >= 1");
  if (!(lipschitz > 0.0)) throw InvalidArgument("lipschitz must be positive");
  const std::uint64_t mult = grid_multiplier(lipschitz);
  const std::uint64_t count = mult << (t + 3);
  const double denom = std::ldexp(static_cast<double>(mult), t + 4);
  std::vector<double> points(count);
  for (std::uint64_t k = 1; k <= count; ++k) {
    points[k - 1] = static_cast<double>(2 * k - 1) / denom;
  }
  return points;
}

double ci_halfwidth(int t) { return std::ldexp(1.0, -(t + 4)); }

double exclusion_threshold(int t) { return 12.0 * ci_halfwidth(t); }

std::uint64_t samples_per_arm(int t, double delta, std::uint64_t n_arms) {
  if (t < 1) throw InvalidArgument("round must be >= 1");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (n_arms < 1) throw InvalidArgument("need at least one arm");
  // alpha = delta / (2^t n_arms);  N = 2 ln(2 / alpha) / l^2 with l = 2^-(t+4).
  const double log_term = static_cast<double>(t + 1) * std::log(2.0) +
                          std::log(static_cast<double>(n_arms)) - std::log(delta);
  const double n = std::ceil(2.0 * log_term * std::ldexp(1.0, 2 * (t + 4)));
  return n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
}

std::vector<double> active_arms(const RRState& state, const RRConfig& cfg) {
  std::vector<double> active;
  for (double h : grid_points(state.round, cfg.lipschitz)) {
    if (state.surviving.contains(h)) active.push_back(h);
  }
  return active;
}

std::uint64_t round_cost(const RRState& state, const RRConfig& cfg) {
  const auto grid = grid_points(state.round, cfg.lipschitz);
  std::uint64_t active = 0;
  for (double h : grid) active += state.surviving.contains(h) ? 1 : 0;
  return active * samples_per_arm(state.round, cfg.delta, grid.size());
}

RRState run_round(const RRState& state, const Bandit& bandit, const RRConfig& cfg,
                  const Rng& rng) {
  if (bandit.dimension() != 1) throw InvalidArgument("rr-core needs a 1-dimensional bandit");
  const int t = state.round;
  if (t < 1) throw InvalidArgument("round must be >= 1");
  if (state.surviving.empty()) throw NoActiveArms("surviving region is empty");

  const auto grid = grid_points(t, cfg.lipschitz);
  const std::uint64_t pulls = samples_per_arm(t, cfg.delta, grid.size());
  const double halfwidth = ci_halfwidth(t);

  // Grid indices of the arms to pull.
  std::vector<std::uint64_t> indices;
  for (std::uint64_t k = 0; k < grid.size(); ++k) {
    if (state.surviving.contains(grid[k])) indices.push_back(k);
  }
  if (indices.empty()) {
    throw NoActiveArms("no grid point of round " + std::to_string(t) +
                       " lies in the surviving region");
  }

  const Rng round_rng = rng.child(static_cast<std::uint64_t>(t));
  std::vector<ArmEstimate> estimates(indices.size());
  auto pull_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t k = indices[i];
      Rng arm_rng = round_rng.child(k);
      const double x[1] = {grid[k]};
      estimates[i] = ArmEstimate{grid[k], pulls, bandit.sample_mean(x, pulls, arm_rng), halfwidth,
                                 t};
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, indices.size());
  if (workers == 1) {
    pull_range(0, indices.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (indices.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(indices.size(), begin + chunk);
      if (begin < end) pool.emplace_back(pull_range, begin, end);
    }
  }

  // Ascending locations with strict comparison: ties go to the smaller h.
  std::size_t best = 0;
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    if (estimates[i].empirical_mean < estimates[best].empirical_mean) best = i;
  }
  const double best_mean = estimates[best].empirical_mean;
  const double threshold = exclusion_threshold(t);

  std::vector<Interval> excluded;
  for (const auto& e : estimates) {
    if (e.empirical_mean - best_mean > threshold) {
      excluded.push_back({std::max(0.0, e.location - halfwidth),
                          std::min(1.0, e.location + halfwidth)});
    }
  }

  RRState next;
  next.round = t + 1;
  next.surviving = state.surviving.subtract(IntervalSet(std::move(excluded)));
  next.best_per_round = state.best_per_round;
  next.best_per_round.push_back({t, estimates[best].location, best_mean});
  next.total_samples = state.total_samples + pulls * estimates.size();
  next.estimates = std::move(estimates);
  return next;
}

bool depth1_promising(const RRState& after_round1, double incumbent) {
  const double lowest = after_round1.best_per_round.back().empirical_mean;
  const double width = 2.0 * ci_halfwidth(1);
  return lowest - ci_halfwidth(1) < incumbent - width;
}

RunResult run(const Bandit& bandit, const RRConfig& cfg, const Rng& rng, SampleBudget* budget,
              std::optional<double> incumbent) {
  cfg.validate();
  RunResult result;
  const int rounds = cfg.rounds();
  while (result.state.round <= rounds) {
    if (budget) {
      const std::uint64_t cost = round_cost(result.state, cfg);
      if (!budget->can_afford(cost)) {
        if (result.state.best_per_round.empty()) {
          throw BudgetExhausted("budget cannot cover the first round (" + std::to_string(cost) +
                                " samples)");
        }
        result.budget_exhausted = true;
        break;
      }
      budget->charge(cost);
    }
    result.state = run_round(result.state, bandit, cfg, rng);
    const auto& best = result.state.best_per_round.back();
    result.trace.push_back({best.round, result.state.estimates.size(),
                            result.state.estimates.front().pulls,
                            result.state.surviving.measure(), best.location, best.empirical_mean,
                            result.state.total_samples});
    result.probed.insert(result.probed.end(), result.state.estimates.begin(),
                         result.state.estimates.end());
    if (best.round == 1 && cfg.early_stop_depth1 && incumbent && rounds > 1 &&
        !depth1_promising(result.state, *incumbent)) {
      result.stopped_early = true;
      break;
    }
  }

  const auto& rounds_best = result.state.best_per_round;
  auto it = std::min_element(rounds_best.begin(), rounds_best.end(),
                             [](const RoundBest& a, const RoundBest& b) {
                               if (a.empirical_mean != b.empirical_mean) {
                                 return a.empirical_mean < b.empirical_mean;
                               }
                               return a.location < b.location;
                             });
  result.recommendation = it->location;
  result.recommendation_mean = it->empirical_mean;
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const RoundTrace> trace, bool header) {
  if (header) {
    out << "round,arms_sampled,pulls_per_arm,surviving_measure,best_location,best_mean,"
           "cumulative_samples\n";
  }
  char buf[256];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%zu,%llu,%.17g,%.17g,%.17g,%llu\n", r.round,
                  r.arms_sampled, static_cast<unsigned long long>(r.pulls_per_arm),
                  r.surviving_measure, r.best_location, r.best_mean,
                  static_cast<unsigned long long>(r.cumulative_samples));
    out << buf;
  }
}

}  // namespace rrb::rr
