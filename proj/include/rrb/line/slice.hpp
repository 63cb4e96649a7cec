#pragma once

#include <span>

#include "rrb/core/bandit.hpp"

namespace rrb::line {

enum class Wrap { periodic, truncated };

/// The line s -> (base + s * direction) mapped back into [0, 1]^d.
struct LinearSlice {
  Point base;
  Point direction;
  Wrap wrap = Wrap::periodic;

  Point at(double s) const;
  double direction_norm() const;
};

/// Maps x coordinate-wise into [0, 1]^d (modulo 1 or clipped).
void wrap_point(std::span<double> x, Wrap wrap);

/// 1-d view of a d-dimensional bandit along a slice, with Lipschitz
/// constant L * |u|.
class SliceBandit final : public Bandit {
 public:
  SliceBandit(const Bandit& inner, LinearSlice slice);

  std::size_t dimension() const override { return 1; }
  double lipschitz() const override { return inner_.lipschitz() * slice_.direction_norm(); }
  double sample(std::span<const double> s, Rng& rng) const override;
  double sample_mean(std::span<const double> s, std::uint64_t n, Rng& rng) const override;
  std::optional<double> mean(std::span<const double> s) const override;

  const LinearSlice& slice() const { return slice_; }

 private:
  const Bandit& inner_;
  LinearSlice slice_;
};

/// One stochastic reward of the d-dimensional bandit at slice.at(s).
double slice_eval(const Bandit& bandit, const LinearSlice& slice, double s, Rng& rng);

}  // namespace rrb::line
