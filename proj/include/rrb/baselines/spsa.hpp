#pragma once

#include <cstdint>

#include "rrb/core/bandit.hpp"
#include "rrb/core/trace.hpp"
#include "rrb/line/slice.hpp"

namespace rrb::baselines {

/// N-shot empirical objective over a bandit. Every evaluation charges the
/// shots against the budget before sampling.
class ShotObjective {
 public:
  ShotObjective(const Bandit& bandit, std::uint64_t shots, line::Wrap wrap, SampleBudget& budget);

  /// Wraps x into the domain, then returns the mean of `shots` rewards.
  double operator()(Point x, Rng& rng) const;
  bool can_evaluate(std::uint64_t count = 1) const { return budget_.can_afford(count * shots_); }

  std::size_t dimension() const { return bandit_.dimension(); }
  std::uint64_t shots() const { return shots_; }
  line::Wrap wrap() const { return wrap_; }
  const SampleBudget& budget() const { return budget_; }

 private:
  const Bandit& bandit_;
  std::uint64_t shots_;
  line::Wrap wrap_;
  SampleBudget& budget_;
};

/// Gains a_k = a / (A + k + 1)^alpha and c_k = c / (k + 1)^gamma.
struct SpsaConfig {
  /// Step gain; a <= 0 calibrates it so the first step has length target_step.
  double a = 0.0;
  double c = 0.1;
  /// Stability constant; negative means 0.1 * max_iters.
  double A = -1.0;
  double alpha = 0.602;
  double gamma = 0.101;
  std::uint64_t shots = 1000;
  std::uint64_t max_iters = 1000;
  std::uint64_t budget = SampleBudget::kUnlimited;
  line::Wrap wrap = line::Wrap::periodic;
  double target_step = 0.1;
  int calibration_draws = 5;

  void validate() const;
  double stability() const { return A < 0.0 ? 0.1 * static_cast<double>(max_iters) : A; }
  double gain_a(std::uint64_t k) const;
  double gain_c(std::uint64_t k) const;
};

/// Gradient estimate (y_plus - y_minus) / (2 c_k delta_i) per component.
Point spsa_gradient(double y_plus, double y_minus, double ck, const Point& delta);

/// One SPSA iteration at step k: draw a Rademacher perturbation, evaluate the
/// objective at theta +/- c_k delta, and step against the estimate.
Point spsa_step(const ShotObjective& f, const Point& theta, std::uint64_t k,
                const SpsaConfig& cfg, Rng& rng);

/// Gain a producing a first step of length cfg.target_step, estimated from
/// cfg.calibration_draws gradient estimates at theta0.
double calibrate_gain(const ShotObjective& f, const Point& theta0, const SpsaConfig& cfg, Rng& rng);

/// Full SPSA run. The trace records the perturbation as the direction and the
/// mean of the two evaluations as the incumbent value.
OptimizeResult spsa(const Bandit& bandit, const Point& start, const SpsaConfig& cfg,
                    const Rng& rng, const StepCallback& on_step = {});

}  // namespace rrb::baselines
