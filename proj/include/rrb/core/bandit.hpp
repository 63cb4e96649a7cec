#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rrb/core/rng.hpp"

namespace rrb {

using Point = std::vector<double>;

/// Reward source over [0, 1]^d.
///
/// Built-in instances produce 1-sub-Gaussian rewards: either bounded in [0, 1]
/// or Gaussian with standard deviation at most one. Rewards are minimized.
class Bandit {
 public:
  virtual ~Bandit() = default;

  virtual std::size_t dimension() const = 0;
  /// Lipschitz constant of the mean with respect to the Euclidean norm.
  virtual double lipschitz() const = 0;

  /// One stochastic reward at x.
  virtual double sample(std::span<const double> x, Rng& rng) const = 0;

  /// Empirical mean of n independent rewards at x.
  ///
  /// The default draws n single samples. Subclasses may override with a draw
  /// from the exact distribution of the sample mean.
  virtual double sample_mean(std::span<const double> x, std::uint64_t n, Rng& rng) const;

  /// Exact mean reward, when the instance can compute it.
  virtual std::optional<double> mean(std::span<const double> /*x*/) const { return std::nullopt; }
};

/// Mean function plus additive Gaussian noise of fixed standard deviation.
/// sigma = 0 gives a zero-noise oracle bandit.
class GaussianBandit final : public Bandit {
 public:
  using MeanFn = std::function<double(std::span<const double>)>;

  GaussianBandit(MeanFn mean, double sigma, double lipschitz, std::size_t dimension = 1);

  std::size_t dimension() const override { return dimension_; }
  double lipschitz() const override { return lipschitz_; }
  double sigma() const { return sigma_; }

  double sample(std::span<const double> x, Rng& rng) const override;
  /// The mean of n Gaussian rewards is Gaussian with standard deviation
  /// sigma / sqrt(n); drawn directly.
  double sample_mean(std::span<const double> x, std::uint64_t n, Rng& rng) const override;
  std::optional<double> mean(std::span<const double> x) const override { return mean_(x); }

 private:
  MeanFn mean_;
  double sigma_;
  double lipschitz_;
  std::size_t dimension_;
};

/// Forwards to another bandit and counts every reward drawn through it.
class CountingBandit final : public Bandit {
 public:
  explicit CountingBandit(const Bandit& inner) : inner_(inner) {}

  std::size_t dimension() const override { return inner_.dimension(); }
  double lipschitz() const override { return inner_.lipschitz(); }
  double sample(std::span<const double> x, Rng& rng) const override;
  double sample_mean(std::span<const double> x, std::uint64_t n, Rng& rng) const override;
  /// Oracle queries are tallied separately and never count as samples.
  std::optional<double> mean(std::span<const double> x) const override;

  std::uint64_t samples() const { return samples_.load(); }
  std::uint64_t oracle_calls() const { return oracle_calls_.load(); }

 private:
  const Bandit& inner_;
  mutable std::atomic<std::uint64_t> samples_{0};
  mutable std::atomic<std::uint64_t> oracle_calls_{0};
};

/// Running sample budget shared by an optimizer and its line searches.
class SampleBudget {
 public:
  static constexpr std::uint64_t kUnlimited = ~std::uint64_t{0};

  explicit SampleBudget(std::uint64_t limit = kUnlimited) : limit_(limit) {}

  std::uint64_t limit() const { return limit_; }
  std::uint64_t used() const { return used_; }
  std::uint64_t remaining() const { return limit_ - used_; }
  bool can_afford(std::uint64_t n) const { return n <= remaining(); }
  /// Throws BudgetExhausted when n exceeds the remainder; nothing is charged then.
  void charge(std::uint64_t n);

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

}  // namespace rrb
