#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rrb/core/interval_set.hpp"

namespace rrb::bounds {

struct Breakpoint {
  double x;
  double v;
};

/// Piecewise-linear regret profile v on [0, 1] with the bound parameters.
///
/// Breakpoints are strictly increasing in x, start at 0 and end at 1; v is
/// non-negative with minimum 0 and every slope is bounded by lipschitz.
struct BoundInstance {
  std::vector<Breakpoint> points;
  double lipschitz = 1.0;
  double epsilon = 1.0 / 32.0;
  double delta = 0.1;

  void validate() const;
  /// D = log2(1 / epsilon).
  int depth() const;
  double value_at(double x) const;
};

/// {x : lo < v(x) <= hi}, or with the inclusivity given by the flags.
IntervalSet level_set(const BoundInstance& inst, double lo, double hi, bool lo_inclusive = false,
                      bool hi_inclusive = true);

/// m(B_t) for B_t = v^-1(2^-t, 2^-(t-1)], 1 <= t <= D.
double level_set_measure(const BoundInstance& inst, int t);

/// sum_{t=1..D} m(B_t) / 8^(D-t).
double weighted_level_sum(const BoundInstance& inst);

/// Instance lower bound ln(1/delta) / (80 eps^3 / L) * sum_t m(B_t) / 8^(D-t).
double lower_bound(const BoundInstance& inst);

/// RR sample bound 2^15 L (log2(1/eps) + ln(1/delta)) / eps^3 * sum_t m(B_t) / 8^(D-t).
double upper_bound(const BoundInstance& inst);

/// c* = eps^2 for the alternate set defined through the optimal value.
double trivial_bound(double epsilon);

/// Number of sets of diameter r/8 covering X_r = v^-1(r, 2r]: each interval of
/// length l needs ceil(l / (r/8)).
std::uint64_t covering_number(const BoundInstance& inst, double r);

struct ZoomingFit {
  double beta;
  double C;
};

/// Least-squares fit of log N_{r/8}(X_r) = log C + beta log(1/r).
/// r_grid needs at least three distinct values in (0, 1/2).
ZoomingFit zooming_fit(const BoundInstance& inst, std::span<const double> r_grid);

/// Reads "x v" lines; '#' starts a comment. Errors name the source and line.
BoundInstance parse_instance(std::istream& in, const std::string& source_name);
BoundInstance read_instance(const std::string& path);

}  // namespace rrb::bounds
