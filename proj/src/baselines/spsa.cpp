#include "rrb/baselines/spsa.hpp"

#include <cmath>

#include "rrb/core/error.hpp"

namespace rrb::baselines {

ShotObjective::ShotObjective(const Bandit& bandit, std::uint64_t shots, line::Wrap wrap,
                             SampleBudget& budget)
    : bandit_(bandit), shots_(shots), wrap_(wrap), budget_(budget) {
  if (shots == 0) throw InvalidArgument("shots per evaluation must be >= 1");
}

double ShotObjective::operator()(Point x, Rng& rng) const {
  line::wrap_point(x, wrap_);
  budget_.charge(shots_);
  return bandit_.sample_mean(x, shots_, rng);
}

void SpsaConfig::validate() const {
  if (!(c > 0.0)) throw InvalidArgument("SPSA c must be positive");
  if (!(alpha > 0.5 && alpha <= 1.0)) throw InvalidArgument("SPSA alpha must lie in (0.5, 1]");
  if (shots == 0) throw InvalidArgument("SPSA shots must be >= 1");
  if (!(target_step > 0.0)) throw InvalidArgument("SPSA target_step must be positive");
}

double SpsaConfig::gain_a(std::uint64_t k) const {
  return a / std::pow(stability() + static_cast<double>(k) + 1.0, alpha);
}

double SpsaConfig::gain_c(std::uint64_t k) const {
  return c / std::pow(static_cast<double>(k) + 1.0, gamma);
}

Point spsa_gradient(double y_plus, double y_minus, double ck, const Point& delta) {
  Point g(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) g[i] = (y_plus - y_minus) / (2.0 * ck * delta[i]);
  return g;
}

namespace {

Point rademacher(std::size_t d, Rng& rng) {
  Point delta(d);
  for (double& x : delta) x = rng.rademacher();
  return delta;
}

struct GradientSample {
  Point delta;
  Point gradient;
  double y_plus;
  double y_minus;
};

GradientSample estimate(const ShotObjective& f, const Point& theta, double ck, Rng& rng) {
  GradientSample s;
  s.delta = rademacher(theta.size(), rng);
  Point plus = theta, minus = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    plus[i] += ck * s.delta[i];
    minus[i] -= ck * s.delta[i];
  }
  s.y_plus = f(plus, rng);
  s.y_minus = f(minus, rng);
  s.gradient = spsa_gradient(s.y_plus, s.y_minus, ck, s.delta);
  return s;
}

Point apply_step(const Point& theta, const Point& gradient, double ak, line::Wrap wrap) {
  Point next = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) next[i] -= ak * gradient[i];
  line::wrap_point(next, wrap);
  return next;
}

}  // namespace

Point spsa_step(const ShotObjective& f, const Point& theta, std::uint64_t k,
                const SpsaConfig& cfg, Rng& rng) {
  const auto s = estimate(f, theta, cfg.gain_c(k), rng);
  return apply_step(theta, s.gradient, cfg.gain_a(k), f.wrap());
}

double calibrate_gain(const ShotObjective& f, const Point& theta0, const SpsaConfig& cfg,
                      Rng& rng) {
  double magnitude = 0.0;
  int draws = 0;
  for (; draws < cfg.calibration_draws && f.can_evaluate(2); ++draws) {
    const auto s = estimate(f, theta0, cfg.gain_c(0), rng);
    double sq = 0.0;
    for (double g : s.gradient) sq += g * g;
    magnitude += std::sqrt(sq);
  }
  if (draws > 0) magnitude /= draws;
  const double scale = std::pow(cfg.stability() + 1.0, cfg.alpha);
  return magnitude > 0.0 ? cfg.target_step * scale / magnitude : cfg.target_step * scale;
}

OptimizeResult spsa(const Bandit& bandit, const Point& start, const SpsaConfig& cfg,
                    const Rng& rng, const StepCallback& on_step) {
  cfg.validate();
  if (start.size() != bandit.dimension()) throw InvalidArgument("start dimension mismatch");
  SampleBudget budget(cfg.budget);
  const ShotObjective f(bandit, cfg.shots, cfg.wrap, budget);

  OptimizeResult out;
  out.best_point = start;
  out.stop = StopReason::max_steps;
  SpsaConfig run_cfg = cfg;
  if (run_cfg.a <= 0.0 && cfg.max_iters > 0) {
    Rng cal = rng.child(0);
    run_cfg.a = calibrate_gain(f, start, cfg, cal);
  }

  Point theta = start;
  for (std::uint64_t k = 0; k < cfg.max_iters; ++k) {
    if (!f.can_evaluate(2)) {
      out.stop = StopReason::budget_exhausted;
      break;
    }
    Rng step_rng = rng.child(k + 1);
    const auto s = estimate(f, theta, run_cfg.gain_c(k), step_rng);
    theta = apply_step(theta, s.gradient, run_cfg.gain_a(k), cfg.wrap);
    StepRecord rec{k + 1, s.delta, true, 0.5 * (s.y_plus + s.y_minus), budget.used(), theta};
    out.best_value = rec.incumbent_value;
    out.trace.push_back(rec);
    if (on_step && on_step(rec)) {
      out.stop = StopReason::callback;
      break;
    }
  }
  out.best_point = theta;
  out.total_samples = budget.used();
  return out;
}

}  // namespace rrb::baselines
