#pragma once

#include <memory>

#include "rrb/core/bandit.hpp"

namespace rrb::harness {

/// f(x) = 1 - (sin(13x) sin(27x) + 1) / 4.
double toy_smooth(double x);

/// Minimizer of toy_smooth on [0, 1]: a dense grid scan followed by golden
/// section refinement. Computed once and cached.
double toy_minimizer();

/// f(i/20) on the cell of x, with i = round(20 x) clamped to 1..20.
double toy_staircase(double x);

/// Staircase cut by a slope-2 wedge at the minimizer:
/// min(staircase(x), f(x*) + 2 |x - x*|).
double toy_objective(double x);

/// toy_objective plus N(0, sigma^2) noise; Lipschitz constant 2.
std::unique_ptr<GaussianBandit> make_toy_bandit(double sigma);

}  // namespace rrb::harness
