#include "rrb/qsim/state_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rrb/core/error.hpp"

namespace rrb::qsim {

Mat2 rotation_matrix(Axis axis, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  switch (axis) {
    case Axis::x: return {{c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0}};
    case Axis::y: return {{c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0}};
    case Axis::z: return {{c, -s}, {0.0, 0.0}, {0.0, 0.0}, {c, s}};
  }
  throw InvalidArgument("unknown rotation axis");
}

Mat2 hadamard_matrix() {
  const double h = 1.0 / std::sqrt(2.0);
  return {{h, 0.0}, {h, 0.0}, {h, 0.0}, {-h, 0.0}};
}

Gate inverse(const Gate& gate) {
  if (const auto* r = std::get_if<Rotation>(&gate)) return Rotation{r->axis, r->qubit, -r->angle};
  if (const auto* d = std::get_if<DiagonalPhase>(&gate)) return DiagonalPhase{d->cost, -d->angle};
  return gate;
}

StateVector::StateVector(unsigned n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw InvalidArgument("qubit count must lie in [1, " + std::to_string(kMaxQubits) + "]");
  }
  amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

void StateVector::check_qubit(unsigned q) const {
  if (q >= n_qubits_) {
    throw InvalidArgument("qubit index " + std::to_string(q) + " out of range for " +
                          std::to_string(n_qubits_) + " qubits");
  }
}

void StateVector::apply_1q(unsigned qubit, const Mat2& m) {
  check_qubit(qubit);
  kernels().apply_1q(amps_.data(), amps_.size(), qubit, m);
}

void StateVector::apply_cz(unsigned q1, unsigned q2) {
  check_qubit(q1);
  check_qubit(q2);
  if (q1 == q2) throw InvalidArgument("controlled-Z needs two distinct qubits");
  kernels().apply_phase_flip(amps_.data(), amps_.size(),
                             (std::size_t{1} << q1) | (std::size_t{1} << q2));
}

void StateVector::apply_diagonal(std::span<const Amplitude> diag) {
  if (diag.size() != amps_.size()) throw InvalidArgument("diagonal size mismatch");
  kernels().apply_diagonal(amps_.data(), diag.data(), amps_.size());
}

void StateVector::apply(const Gate& gate) {
  std::visit(
      [this](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Rotation>) {
          apply_1q(g.qubit, rotation_matrix(g.axis, g.angle));
        } else if constexpr (std::is_same_v<G, ControlledZ>) {
          apply_cz(g.q1, g.q2);
        } else if constexpr (std::is_same_v<G, Hadamard>) {
          apply_1q(g.qubit, hadamard_matrix());
        } else {
          std::vector<Amplitude> diag(amps_.size());
          for (std::size_t z = 0; z < diag.size(); ++z) {
            const double phi = -g.angle * g.cost(z);
            diag[z] = {std::cos(phi), std::sin(phi)};
          }
          apply_diagonal(diag);
        }
      },
      gate);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  kernels().probabilities(amps_.data(), p.data(), amps_.size());
  return p;
}

double StateVector::norm_squared() const {
  const auto p = probabilities();
  const std::vector<double> ones(p.size(), 1.0);
  return kernels().dot(p.data(), ones.data(), p.size());
}

double StateVector::expectation(std::span<const double> values) const {
  if (values.size() != amps_.size()) throw InvalidArgument("observable size mismatch");
  const auto p = probabilities();
  return kernels().dot(p.data(), values.data(), p.size());
}

OutcomeSampler::OutcomeSampler(std::span<const double> probabilities)
    : cumulative_(probabilities.size()) {
  if (probabilities.empty()) throw InvalidArgument("empty outcome distribution");
  double run = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    run += probabilities[i];
    cumulative_[i] = run;
  }
}

std::uint64_t OutcomeSampler::draw(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::uint64_t>(it - cumulative_.begin());
}

}  // namespace rrb::qsim
