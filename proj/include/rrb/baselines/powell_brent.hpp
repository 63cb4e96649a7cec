#pragma once

#include <cstdint>
#include <functional>

#include "rrb/baselines/spsa.hpp"
#include "rrb/core/bandit.hpp"
#include "rrb/core/trace.hpp"
#include "rrb/line/slice.hpp"

namespace rrb::baselines {

struct LineMinimum {
  double x;
  double value;
  int evaluations;
};

/// Brent's bounded scalar minimizer: golden-section steps with parabolic
/// interpolation, terminating when the bracket shrinks below ~xtol.
LineMinimum brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                           double xtol = 1e-5, int max_evaluations = 500);

struct PowellBrentConfig {
  std::uint64_t shots = 100'000;
  /// Direction-set sweeps.
  std::uint64_t max_iters = 100;
  /// Line tolerance passed to Brent.
  double xtol = 1e-4;
  int max_line_evaluations = 100;
  /// Relative decrease per sweep below which the method has converged.
  double ftol = 1e-6;
  std::uint64_t budget = SampleBudget::kUnlimited;
  line::Wrap wrap = line::Wrap::periodic;

  void validate() const;
};

/// Parameter interval [lo, hi] reachable along base + s * u inside the domain:
/// [-1/2, 1/2] on the torus, the clipped box span otherwise.
std::pair<double, double> line_bounds(const Point& base, const Point& u, line::Wrap wrap);

/// Powell's direction-set method over the N-shot empirical objective, with
/// Brent line minimization. Each line search is one trace step.
OptimizeResult powell_brent(const Bandit& bandit, const Point& start, const PowellBrentConfig& cfg,
                            const Rng& rng, const StepCallback& on_step = {});

}  // namespace rrb::baselines
