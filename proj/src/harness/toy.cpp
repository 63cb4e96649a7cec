#include "rrb/harness/toy.hpp"

#include <algorithm>
#include <cmath>

namespace rrb::harness {

double toy_smooth(double x) { return 1.0 - (std::sin(13.0 * x) * std::sin(27.0 * x) + 1.0) / 4.0; }

namespace {

double locate_minimizer() {
  constexpr int kGrid = 100'000;
  int best = 0;
  double best_value = toy_smooth(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = toy_smooth(static_cast<double>(i) / kGrid);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double a = std::max(0.0, static_cast<double>(best - 1) / kGrid);
  double b = std::min(1.0, static_cast<double>(best + 1) / kGrid);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = toy_smooth(c), fd = toy_smooth(d);
  for (int iter = 0; iter < 200 && b - a > 1e-15; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = toy_smooth(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = toy_smooth(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double toy_minimizer() {
  static const double x_star = locate_minimizer();
  return x_star;
}

double toy_staircase(double x) {
  const int i = std::clamp(static_cast<int>(std::lround(20.0 * x)), 1, 20);
  return toy_smooth(i / 20.0);
}

double toy_objective(double x) {
  const double xs = toy_minimizer();
  return std::min(toy_staircase(x), toy_smooth(xs) + 2.0 * std::abs(x - xs));
}

std::unique_ptr<GaussianBandit> make_toy_bandit(double sigma) {
  return std::make_unique<GaussianBandit>(
      [](std::span<const double> x) { return toy_objective(x[0]); }, sigma, 2.0, 1);
}

}  // namespace rrb::harness
