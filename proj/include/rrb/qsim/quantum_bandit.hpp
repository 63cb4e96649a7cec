#pragma once

#include <memory>
#include <vector>

#include "rrb/core/bandit.hpp"
#include "rrb/qsim/circuits.hpp"

namespace rrb::qsim {

/// Shot-level bandit over a parameterized circuit.
///
/// A point x in [0, 1]^d is mapped to angles 2*pi*x. Each reward is one
/// measurement of a bounded cost; the cost takes finitely many values, so the
/// mean of n shots is drawn exactly from the multinomial over those values.
class QuantumBandit : public Bandit {
 public:
  std::size_t dimension() const override { return dimension_; }
  double lipschitz() const override { return lipschitz_; }

  double sample(std::span<const double> x, Rng& rng) const override;
  double sample_mean(std::span<const double> x, std::uint64_t n, Rng& rng) const override;
  std::optional<double> mean(std::span<const double> x) const override;

  /// Probability of each reward level at x; levels are given by reward_levels().
  std::vector<double> level_probabilities(std::span<const double> x) const;
  const std::vector<double>& reward_levels() const { return levels_; }

 protected:
  QuantumBandit(std::size_t dimension, double lipschitz, std::vector<double> levels)
      : dimension_(dimension), lipschitz_(lipschitz), levels_(std::move(levels)) {}

  virtual StateVector prepare(std::span<const double> angles) const = 0;
  /// Reward level index of basis state z.
  virtual std::size_t level_of(std::uint64_t z) const = 0;
  virtual double exact(std::span<const double> angles) const = 0;

 private:
  std::vector<double> angles(std::span<const double> x) const;

  std::size_t dimension_;
  double lipschitz_;
  std::vector<double> levels_;
};

class PqcBandit final : public QuantumBandit {
 public:
  explicit PqcBandit(PqcAnsatz ansatz);
  const PqcAnsatz& ansatz() const { return ansatz_; }

 private:
  StateVector prepare(std::span<const double> angles) const override;
  std::size_t level_of(std::uint64_t z) const override;
  double exact(std::span<const double> angles) const override;

  PqcAnsatz ansatz_;
};

/// Point layout: (gamma_1..gamma_p, beta_1..beta_p).
class QaoaBandit final : public QuantumBandit {
 public:
  explicit QaoaBandit(QaoaInstance instance);
  const QaoaInstance& instance() const { return inst_; }

 private:
  StateVector prepare(std::span<const double> angles) const override;
  std::size_t level_of(std::uint64_t z) const override;
  double exact(std::span<const double> angles) const override;

  QaoaInstance inst_;
};

/// Lipschitz bound in x for a circuit whose parameter k enters as
/// exp(-i 2 pi x_k G_k): 2 pi sqrt(sum_k (spread(G_k) spread(O) / 2)^2).
double lipschitz_bound(std::span<const double> generator_spreads, double observable_spread);

std::unique_ptr<PqcBandit> make_pqc_bandit(unsigned n_qubits);
std::unique_ptr<QaoaBandit> make_qaoa_bandit(Graph graph, unsigned layers);

}  // namespace rrb::qsim
