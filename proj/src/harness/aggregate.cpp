#include "rrb/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "rrb/core/error.hpp"

namespace rrb::harness {

double midpoint_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  if (lo == hi) return sorted[lo];
  return 0.5 * (sorted[lo] + sorted[hi]);
}

Summary summarize(std::span<const double> n_total) {
  Summary s;
  s.runs = n_total.size();
  if (s.runs == 0) return s;
  std::vector<double> values(n_total.begin(), n_total.end());
  for (double v : values) {
    if (std::isnan(v)) throw InvalidArgument("NaN sample count in summary");
    s.crossed += std::isfinite(v) ? 1 : 0;
  }
  std::sort(values.begin(), values.end());
  s.success_rate = static_cast<double>(s.crossed) / static_cast<double>(s.runs);
  s.median = midpoint_quantile(values, 0.5);
  s.q25 = midpoint_quantile(values, 0.25);
  s.q75 = midpoint_quantile(values, 0.75);
  s.failed = 2 * s.crossed < s.runs;
  return s;
}

}  // namespace rrb::harness
