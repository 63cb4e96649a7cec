#include "rrb/line/slice.hpp"

#include <algorithm>
#include <cmath>

#include "rrb/core/error.hpp"

namespace rrb::line {

void wrap_point(std::span<double> x, Wrap wrap) {
  for (double& v : x) {
    if (wrap == Wrap::periodic) {
      v -= std::floor(v);
      if (v >= 1.0) v = 0.0;
    } else {
      v = std::clamp(v, 0.0, 1.0);
    }
  }
}

Point LinearSlice::at(double s) const {
  Point x(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) x[i] = base[i] + s * direction[i];
  wrap_point(x, wrap);
  return x;
}

double LinearSlice::direction_norm() const {
  double sq = 0.0;
  for (double u : direction) sq += u * u;
  return std::sqrt(sq);
}

SliceBandit::SliceBandit(const Bandit& inner, LinearSlice slice)
    : inner_(inner), slice_(std::move(slice)) {
  if (slice_.base.size() != inner_.dimension() || slice_.direction.size() != inner_.dimension()) {
    throw InvalidArgument("slice dimension does not match bandit dimension");
  }
  if (!(slice_.direction_norm() > 0.0)) throw InvalidArgument("slice direction must be nonzero");
}

double SliceBandit::sample(std::span<const double> s, Rng& rng) const {
  return inner_.sample(slice_.at(s[0]), rng);
}

double SliceBandit::sample_mean(std::span<const double> s, std::uint64_t n, Rng& rng) const {
  return inner_.sample_mean(slice_.at(s[0]), n, rng);
}

std::optional<double> SliceBandit::mean(std::span<const double> s) const {
  return inner_.mean(slice_.at(s[0]));
}

double slice_eval(const Bandit& bandit, const LinearSlice& slice, double s, Rng& rng) {
  return bandit.sample(slice.at(s), rng);
}

}  // namespace rrb::line
