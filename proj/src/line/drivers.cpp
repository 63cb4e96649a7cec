#include "rrb/line/drivers.hpp"

#include <algorithm>
#include <cmath>

#include "rrb/core/error.hpp"

namespace rrb::line {

namespace {

constexpr std::uint64_t kStartKey = 0;

std::uint64_t line_key(std::uint64_t step) { return 2 * step + 1; }
std::uint64_t accept_key(std::uint64_t step) { return 2 * step + 2; }

/// Coordinate difference a - b; minimal image on the torus when periodic.
Point displacement(const Point& a, const Point& b, Wrap wrap) {
  Point d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    d[i] = a[i] - b[i];
    if (wrap == Wrap::periodic) d[i] -= std::round(d[i]);
  }
  return d;
}

double norm(const Point& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

struct Incumbent {
  Point point;
  double value;
};

/// Estimates g(start) with the depth-1 sample count. Empty when the budget
/// cannot cover it.
std::optional<Incumbent> estimate_start(const Bandit& bandit, const Point& start,
                                        const DriverConfig& cfg, const Rng& rng,
                                        SampleBudget& budget) {
  const auto arms = rr::grid_points(1, cfg.lipschitz).size();
  const std::uint64_t n = rr::samples_per_arm(1, cfg.delta, arms);
  if (!budget.can_afford(n)) return std::nullopt;
  budget.charge(n);
  Rng start_rng = rng.child(kStartKey);
  return Incumbent{start, bandit.sample_mean(start, n, start_rng)};
}

void check_start(const Bandit& bandit, const Point& start) {
  if (start.size() != bandit.dimension()) {
    throw InvalidArgument("start point dimension does not match bandit");
  }
}

}  // namespace

void DriverConfig::validate() const {
  if (!(q > 0.0)) throw InvalidArgument("q must be positive");
  if (d_max < 1) throw InvalidArgument("d_max must be >= 1");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (!(lipschitz > 0.0)) throw InvalidArgument("lipschitz must be positive");
  line_config(1.0).validate();
  if (budget == SampleBudget::kUnlimited && max_steps == std::numeric_limits<std::uint64_t>::max()) {
    throw InvalidArgument("driver needs a finite budget or step cap");
  }
}

rr::RRConfig DriverConfig::line_config(double direction_norm) const {
  rr::RRConfig c;
  c.epsilon = epsilon_line;
  c.delta = delta;
  c.lipschitz = lipschitz * direction_norm;
  c.max_depth = d_max;
  c.early_stop_depth1 = early_stop_depth1;
  c.threads = threads;
  return c;
}

LineSearchResult rr_line_search(const Bandit& bandit, const LinearSlice& slice,
                                const DriverConfig& cfg, double incumbent_value, const Rng& rng,
                                SampleBudget& budget) {
  const SliceBandit line(bandit, slice);
  const rr::RRConfig rcfg = cfg.line_config(slice.direction_norm());

  LineSearchResult result;
  result.s_hat = 0.0;
  result.g_hat = incumbent_value;
  rr::RunResult run;
  try {
    run = rr::run(line, rcfg, rng, &budget, incumbent_value);
  } catch (const BudgetExhausted&) {
    result.budget_exhausted = true;
    return result;
  }
  result.samples_used = run.state.total_samples;
  result.budget_exhausted = run.budget_exhausted;
  result.probed = std::move(run.probed);

  for (const auto& arm : result.probed) {
    if (arm.empirical_mean < result.best_probed_value ||
        (arm.empirical_mean == result.best_probed_value && arm.location < result.best_probed_s)) {
      result.best_probed_s = arm.location;
      result.best_probed_value = arm.empirical_mean;
    }
  }
  if (result.best_probed_value < incumbent_value) {
    result.s_hat = result.best_probed_s;
    result.g_hat = result.best_probed_value;
  }
  return result;
}

Point random_unit_vector(std::size_t dimension, Rng& rng) {
  if (dimension == 0) throw InvalidArgument("dimension must be positive");
  Point u(dimension);
  double n = 0.0;
  while (!(n > 1e-300)) {
    for (double& x : u) x = rng.normal();
    n = norm(u);
  }
  for (double& x : u) x /= n;
  return u;
}

OptimizeResult powell_driver(const Bandit& bandit, const Point& start, const DriverConfig& cfg,
                             const Rng& rng, const StepCallback& on_step) {
  check_start(bandit, start);
  if (bandit.dimension() < 2) {
    throw InvalidArgument("powell_driver needs dimension >= 2; use rr::run for 1-d problems");
  }
  cfg.validate();

  OptimizeResult out;
  out.best_point = start;
  SampleBudget budget(cfg.budget);
  auto inc = estimate_start(bandit, start, cfg, rng, budget);
  if (!inc) {
    out.stop = StopReason::budget_exhausted;
    return out;
  }
  out.best_value = inc->value;

  const std::size_t d = bandit.dimension();
  std::vector<Point> directions(d, Point(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) directions[i][i] = 1.0;

  std::uint64_t step = 0;
  auto finish = [&](StopReason reason) {
    out.best_point = inc->point;
    out.best_value = inc->value;
    out.total_samples = budget.used();
    out.stop = reason;
    return out;
  };

  while (true) {
    const Point sweep_start = inc->point;
    double biggest_drop = 0.0;
    std::size_t biggest_index = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (step >= cfg.max_steps) return finish(StopReason::max_steps);
      const LinearSlice slice{inc->point, directions[i], cfg.wrap};
      const auto line =
          rr_line_search(bandit, slice, cfg, inc->value, rng.child(line_key(step)), budget);
      if (line.samples_used == 0 && line.budget_exhausted) {
        return finish(StopReason::budget_exhausted);
      }
      const bool accepted = line.s_hat != 0.0;
      if (accepted) {
        const double drop = inc->value - line.g_hat;
        if (drop > biggest_drop) {
          biggest_drop = drop;
          biggest_index = i;
        }
        inc = Incumbent{slice.at(line.s_hat), line.g_hat};
      }
      ++step;
      StepRecord rec{step, directions[i], accepted, inc->value, budget.used(), inc->point};
      out.trace.push_back(rec);
      if (on_step && on_step(rec)) return finish(StopReason::callback);
      if (line.budget_exhausted) return finish(StopReason::budget_exhausted);
    }
    Point moved = displacement(inc->point, sweep_start, cfg.wrap);
    const double length = norm(moved);
    if (length > 1e-12) {
      for (double& x : moved) x /= length;
      directions[biggest_index] = std::move(moved);
    }
  }
}

OptimizeResult random_direction_driver(const Bandit& bandit, const Point& start,
                                       const DriverConfig& cfg, const Rng& rng,
                                       const StepCallback& on_step) {
  check_start(bandit, start);
  if (cfg.policy != Policy::reject && cfg.policy != Policy::aim) {
    throw InvalidArgument("random_direction_driver needs the reject or aim policy");
  }
  cfg.validate();

  OptimizeResult out;
  out.best_point = start;
  SampleBudget budget(cfg.budget);
  auto inc = estimate_start(bandit, start, cfg, rng, budget);
  if (!inc) {
    out.stop = StopReason::budget_exhausted;
    return out;
  }
  out.best_value = inc->value;

  // Probed points of the previous line, for the AIm comparison.
  std::vector<Incumbent> previous_line;
  double previous_accepted_s = 0.0;

  auto finish = [&](StopReason reason) {
    out.best_point = inc->point;
    out.best_value = inc->value;
    out.total_samples = budget.used();
    out.stop = reason;
    return out;
  };

  for (std::uint64_t step = 0;; ++step) {
    if (step >= cfg.max_steps) return finish(StopReason::max_steps);
    Rng aux = rng.child(accept_key(step));
    const LinearSlice slice{inc->point, random_unit_vector(bandit.dimension(), aux), cfg.wrap};
    const auto line =
        rr_line_search(bandit, slice, cfg, inc->value, rng.child(line_key(step)), budget);
    if (line.samples_used == 0 && line.budget_exhausted) {
      return finish(StopReason::budget_exhausted);
    }

    const Point candidate = slice.at(line.best_probed_s);
    bool accepted = false;
    if (cfg.policy == Policy::reject) {
      const double exponent =
          cfg.acceptance == AcceptanceRule::value_difference
              ? line.best_probed_value - inc->value
              : line.best_probed_s - previous_accepted_s;
      const double a = exponent <= 0.0 ? 1.0 : std::exp(-cfg.q * exponent);
      accepted = aux.uniform() < a;
    } else if (previous_line.empty()) {
      accepted = line.best_probed_value < inc->value;
    } else {
      // Stored estimate of the previous line at its probed point nearest to
      // the candidate.
      double nearest = std::numeric_limits<double>::infinity();
      double nearest_value = 0.0;
      for (const auto& p : previous_line) {
        const double dist = norm(displacement(candidate, p.point, cfg.wrap));
        if (dist < nearest) {
          nearest = dist;
          nearest_value = p.value;
        }
      }
      accepted = line.best_probed_value < nearest_value;
    }

    previous_line.clear();
    for (const auto& arm : line.probed) {
      previous_line.push_back({slice.at(arm.location), arm.empirical_mean});
    }
    if (accepted) {
      inc = Incumbent{candidate, line.best_probed_value};
      previous_accepted_s = line.best_probed_s;
    } else {
      previous_accepted_s = 0.0;
    }

    StepRecord rec{step + 1, slice.direction, accepted, inc->value, budget.used(), inc->point};
    out.trace.push_back(rec);
    if (on_step && on_step(rec)) return finish(StopReason::callback);
    if (line.budget_exhausted) return finish(StopReason::budget_exhausted);
  }
}

OptimizeResult run_driver(const Bandit& bandit, const Point& start, const DriverConfig& cfg,
                          const Rng& rng, const StepCallback& on_step) {
  if (cfg.policy == Policy::rr_powell) return powell_driver(bandit, start, cfg, rng, on_step);
  return random_direction_driver(bandit, start, cfg, rng, on_step);
}

}  // namespace rrb::line
