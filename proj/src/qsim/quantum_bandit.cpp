#include "rrb/qsim/quantum_bandit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "rrb/core/error.hpp"

namespace rrb::qsim {

std::vector<double> QuantumBandit::angles(std::span<const double> x) const {
  if (x.size() != dimension_) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) + ", expected " +
                          std::to_string(dimension_));
  }
  std::vector<double> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = 2.0 * std::numbers::pi * x[i];
  return a;
}

std::vector<double> QuantumBandit::level_probabilities(std::span<const double> x) const {
  const auto probs = prepare(angles(x)).probabilities();
  std::vector<double> grouped(levels_.size(), 0.0);
  for (std::size_t z = 0; z < probs.size(); ++z) grouped[level_of(z)] += probs[z];
  return grouped;
}

double QuantumBandit::sample(std::span<const double> x, Rng& rng) const {
  return sample_mean(x, 1, rng);
}

double QuantumBandit::sample_mean(std::span<const double> x, std::uint64_t n, Rng& rng) const {
  if (n == 0) throw InvalidArgument("sample_mean needs at least one shot");
  const auto grouped = level_probabilities(x);
  double mass = 0.0;
  for (double p : grouped) mass += p;
  // Multinomial counts by sequential conditional binomials.
  std::uint64_t left = n;
  double weighted = 0.0;
  for (std::size_t k = 0; k < grouped.size() && left > 0; ++k) {
    std::uint64_t count = left;
    if (k + 1 < grouped.size()) {
      const double p = mass > 0.0 ? std::min(1.0, grouped[k] / mass) : 0.0;
      count = rng.binomial(left, p);
    }
    mass -= grouped[k];
    left -= count;
    weighted += static_cast<double>(count) * levels_[k];
  }
  return weighted / static_cast<double>(n);
}

std::optional<double> QuantumBandit::mean(std::span<const double> x) const {
  return exact(angles(x));
}

double lipschitz_bound(std::span<const double> generator_spreads, double observable_spread) {
  double sum = 0.0;
  for (double g : generator_spreads) {
    const double term = 0.5 * g * observable_spread;
    sum += term * term;
  }
  return 2.0 * std::numbers::pi * std::sqrt(sum);
}

namespace {

std::vector<double> pqc_levels(unsigned n) {
  std::vector<double> levels(n + 1);
  for (unsigned k = 0; k <= n; ++k) levels[k] = static_cast<double>(k) / n;
  return levels;
}

double pqc_lipschitz(const PqcAnsatz& a) {
  // Each rotation generator is a Pauli over two, eigenvalues +-1/2.
  const std::vector<double> spreads(a.parameter_count(), 1.0);
  return lipschitz_bound(spreads, 1.0);
}

std::vector<double> qaoa_levels(unsigned maxcut) {
  std::vector<double> levels(maxcut + 1);
  for (unsigned c = 0; c <= maxcut; ++c) levels[c] = 1.0 - static_cast<double>(c) / maxcut;
  return levels;
}

double qaoa_lipschitz(const QaoaInstance& inst) {
  std::vector<double> spreads;
  // Cost generator: cut values range over [0, maxcut]. Mixer: sum of n X's.
  for (unsigned l = 0; l < inst.layers; ++l) spreads.push_back(inst.maxcut);
  for (unsigned l = 0; l < inst.layers; ++l) spreads.push_back(2.0 * inst.graph.n_vertices());
  return lipschitz_bound(spreads, 1.0);
}

}  // namespace

PqcBandit::PqcBandit(PqcAnsatz ansatz)
    : QuantumBandit(ansatz.parameter_count(), pqc_lipschitz(ansatz), pqc_levels(ansatz.n_qubits)),
      ansatz_(std::move(ansatz)) {
  ansatz_.validate();
}

StateVector PqcBandit::prepare(std::span<const double> angles) const {
  return prepare_pqc(angles, ansatz_);
}

std::size_t PqcBandit::level_of(std::uint64_t z) const {
  return static_cast<std::size_t>(std::popcount(z));
}

double PqcBandit::exact(std::span<const double> angles) const {
  return expected_cost(angles, ansatz_);
}

QaoaBandit::QaoaBandit(QaoaInstance instance)
    : QuantumBandit(2 * std::size_t{instance.layers}, qaoa_lipschitz(instance),
                    qaoa_levels(instance.maxcut)),
      inst_(std::move(instance)) {}

StateVector QaoaBandit::prepare(std::span<const double> angles) const {
  return prepare_qaoa(angles.subspan(0, inst_.layers), angles.subspan(inst_.layers), inst_);
}

std::size_t QaoaBandit::level_of(std::uint64_t z) const {
  return static_cast<std::size_t>(inst_.cut_table[z]);
}

double QaoaBandit::exact(std::span<const double> angles) const {
  return expected_cost(angles.subspan(0, inst_.layers), angles.subspan(inst_.layers), inst_);
}

std::unique_ptr<PqcBandit> make_pqc_bandit(unsigned n_qubits) {
  return std::make_unique<PqcBandit>(PqcAnsatz::square(n_qubits));
}

std::unique_ptr<QaoaBandit> make_qaoa_bandit(Graph graph, unsigned layers) {
  return std::make_unique<QaoaBandit>(QaoaInstance::make(std::move(graph), layers));
}

}  // namespace rrb::qsim
