#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rrb::harness {

/// Quantile q of ascending data at position q (n - 1); a fractional position
/// takes the midpoint of its two neighbours. Infinite entries are allowed.
double midpoint_quantile(std::span<const double> sorted, double q);

struct Summary {
  std::size_t runs = 0;
  std::size_t crossed = 0;
  double success_rate = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  /// Fewer than half of the runs crossed; the quantiles are not meaningful.
  bool failed = true;
};

/// Sample counts to threshold, one per run; censored runs are +infinity.
Summary summarize(std::span<const double> n_total);

}  // namespace rrb::harness
