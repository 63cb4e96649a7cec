#include "rrb/baselines/powell_brent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrb/core/error.hpp"

namespace rrb::baselines {

LineMinimum brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                           double xtol, int max_evaluations) {
  if (!(lo < hi)) throw InvalidArgument("brent_minimize needs lo < hi");
  const double sqrt_eps = std::sqrt(2.2e-16);
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  double a = lo, b = hi;
  double fulc = a + golden * (b - a);
  double nfc = fulc, xf = fulc;
  double rat = 0.0, e = 0.0;
  double fx = f(xf);
  int evaluations = 1;
  double ffulc = fx, fnfc = fx;
  double xm = 0.5 * (a + b);
  double tol1 = sqrt_eps * std::abs(xf) + xtol / 3.0;
  double tol2 = 2.0 * tol1;

  while (std::abs(xf - xm) > tol2 - 0.5 * (b - a) && evaluations < max_evaluations) {
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      golden_step = false;
      double r = (xf - nfc) * (fx - ffulc);
      double q = (xf - fulc) * (fx - fnfc);
      double p = (xf - fulc) * q - (xf - nfc) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      r = e;
      e = rat;
      if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - xf) && p < q * (b - xf)) {
        rat = p / q;
        const double x = xf + rat;
        if (x - a < tol2 || b - x < tol2) rat = xm - xf >= 0.0 ? tol1 : -tol1;
      } else {
        golden_step = true;
      }
    }
    if (golden_step) {
      e = xf >= xm ? a - xf : b - xf;
      rat = golden * e;
    }
    const double sign = rat >= 0.0 ? 1.0 : -1.0;
    const double x = xf + sign * std::max(std::abs(rat), tol1);
    const double fu = f(x);
    ++evaluations;
    if (fu <= fx) {
      if (x >= xf) {
        a = xf;
      } else {
        b = xf;
      }
      fulc = nfc;
      ffulc = fnfc;
      nfc = xf;
      fnfc = fx;
      xf = x;
      fx = fu;
    } else {
      if (x < xf) {
        a = x;
      } else {
        b = x;
      }
      if (fu <= fnfc || nfc == xf) {
        fulc = nfc;
        ffulc = fnfc;
        nfc = x;
        fnfc = fu;
      } else if (fu <= ffulc || fulc == xf || fulc == nfc) {
        fulc = x;
        ffulc = fu;
      }
    }
    xm = 0.5 * (a + b);
    tol1 = sqrt_eps * std::abs(xf) + xtol / 3.0;
    tol2 = 2.0 * tol1;
  }
  return {xf, fx, evaluations};
}

void PowellBrentConfig::validate() const {
  if (shots == 0) throw InvalidArgument("Powell shots must be >= 1");
  if (!(xtol > 0.0)) throw InvalidArgument("Powell xtol must be positive");
  if (max_line_evaluations < 2) throw InvalidArgument("Powell needs >= 2 line evaluations");
}

std::pair<double, double> line_bounds(const Point& base, const Point& u, line::Wrap wrap) {
  if (wrap == line::Wrap::periodic) return {-0.5, 0.5};
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (u[i] == 0.0) continue;
    double s0 = (0.0 - base[i]) / u[i];
    double s1 = (1.0 - base[i]) / u[i];
    if (s0 > s1) std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
  }
  return {lo, hi};
}

namespace {

double norm(const Point& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

struct Stop {
  StopReason reason;
};

}  // namespace

OptimizeResult powell_brent(const Bandit& bandit, const Point& start, const PowellBrentConfig& cfg,
                            const Rng& rng, const StepCallback& on_step) {
  cfg.validate();
  const std::size_t d = bandit.dimension();
  if (start.size() != d || d == 0) throw InvalidArgument("start dimension mismatch");

  SampleBudget budget(cfg.budget);
  const ShotObjective objective(bandit, cfg.shots, cfg.wrap, budget);
  std::uint64_t eval_counter = 0;
  auto f = [&](const Point& x) {
    Rng r = rng.child(eval_counter++);
    return objective(x, r);
  };

  OptimizeResult out;
  out.best_point = start;
  out.stop = StopReason::max_steps;
  if (cfg.max_iters == 0) return out;

  Point x = start;
  line::wrap_point(x, cfg.wrap);
  double fval = 0.0;
  std::vector<Point> directions(d, Point(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) directions[i][i] = 1.0;
  std::uint64_t step = 0;

  auto line_search = [&](const Point& u) {
    const Point unit = [&] {
      Point v = u;
      const double n = norm(v);
      for (double& c : v) c /= n;
      return v;
    }();
    auto [lo, hi] = line_bounds(x, unit, cfg.wrap);
    if (!(hi - lo > 1e-12)) return;
    auto along = [&](double s) {
      Point p = x;
      for (std::size_t i = 0; i < d; ++i) p[i] += s * unit[i];
      return f(p);
    };
    const auto m = brent_minimize(along, lo, hi, cfg.xtol, cfg.max_line_evaluations);
    for (std::size_t i = 0; i < d; ++i) x[i] += m.x * unit[i];
    line::wrap_point(x, cfg.wrap);
    fval = m.value;
    ++step;
    StepRecord rec{step, unit, true, fval, budget.used(), x};
    out.trace.push_back(rec);
    if (on_step && on_step(rec)) throw Stop{StopReason::callback};
  };

  try {
    fval = f(x);
    for (std::uint64_t iter = 0; iter < cfg.max_iters; ++iter) {
      const double fx = fval;
      const Point x_sweep_start = x;
      std::size_t biggest = 0;
      double biggest_drop = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double before = fval;
        line_search(directions[i]);
        if (before - fval > biggest_drop) {
          biggest_drop = before - fval;
          biggest = i;
        }
      }
      if (2.0 * (fx - fval) <= cfg.ftol * (std::abs(fx) + std::abs(fval)) + 1e-20) {
        out.stop = StopReason::converged;
        break;
      }
      Point moved(d);
      Point extrapolated(d);
      for (std::size_t i = 0; i < d; ++i) {
        moved[i] = x[i] - x_sweep_start[i];
        if (cfg.wrap == line::Wrap::periodic) moved[i] -= std::round(moved[i]);
        extrapolated[i] = x[i] + moved[i];
      }
      if (norm(moved) <= 1e-12) continue;
      const double fx2 = f(extrapolated);
      if (fx > fx2) {
        double t = 2.0 * (fx + fx2 - 2.0 * fval);
        const double a = fx - fval - biggest_drop;
        t *= a * a;
        const double b = fx - fx2;
        t -= biggest_drop * b * b;
        if (t < 0.0) {
          line_search(moved);
          directions[biggest] = directions.back();
          directions.back() = moved;
        }
      }
    }
  } catch (const BudgetExhausted&) {
    out.stop = StopReason::budget_exhausted;
  } catch (const Stop& s) {
    out.stop = s.reason;
  }
  out.best_point = x;
  out.best_value = fval;
  out.total_samples = budget.used();
  return out;
}

}  // namespace rrb::baselines
