#include "rrb/core/bandit.hpp"

#include <cmath>
#include <string>

#include "rrb/core/error.hpp"

namespace rrb {

double Bandit::sample_mean(std::span<const double> x, std::uint64_t n, Rng& rng) const {
  if (n == 0) throw InvalidArgument("sample_mean needs n >= 1");
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) sum += sample(x, rng);
  return sum / static_cast<double>(n);
}

GaussianBandit::GaussianBandit(MeanFn mean, double sigma, double lipschitz, std::size_t dimension)
    : mean_(std::move(mean)), sigma_(sigma), lipschitz_(lipschitz), dimension_(dimension) {
  if (!mean_) throw InvalidArgument("GaussianBandit needs a mean function");
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw InvalidArgument("noise sigma must lie in [0, 1] for 1-sub-Gaussian rewards");
  }
  if (!(lipschitz > 0.0)) throw InvalidArgument("Lipschitz constant must be positive");
  if (dimension == 0) throw InvalidArgument("dimension must be positive");
}

double GaussianBandit::sample(std::span<const double> x, Rng& rng) const {
  const double mu = mean_(x);
  return sigma_ == 0.0 ? mu : mu + sigma_ * rng.normal();
}

double GaussianBandit::sample_mean(std::span<const double> x, std::uint64_t n, Rng& rng) const {
  if (n == 0) throw InvalidArgument("sample_mean needs n >= 1");
  const double mu = mean_(x);
  if (sigma_ == 0.0) return mu;
  return mu + sigma_ / std::sqrt(static_cast<double>(n)) * rng.normal();
}

double CountingBandit::sample(std::span<const double> x, Rng& rng) const {
  samples_.fetch_add(1);
  return inner_.sample(x, rng);
}

double CountingBandit::sample_mean(std::span<const double> x, std::uint64_t n, Rng& rng) const {
  samples_.fetch_add(n);
  return inner_.sample_mean(x, n, rng);
}

std::optional<double> CountingBandit::mean(std::span<const double> x) const {
  oracle_calls_.fetch_add(1);
  return inner_.mean(x);
}

void SampleBudget::charge(std::uint64_t n) {
  if (!can_afford(n)) {
    throw BudgetExhausted("sample budget exhausted: need " + std::to_string(n) + ", have " +
                          std::to_string(remaining()));
  }
  used_ += n;
}

}  // namespace rrb
