#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "rrb/core/rng.hpp"
#include "rrb/qsim/kernels.hpp"

namespace rrb::qsim {

enum class Axis { x, y, z };

/// exp(-i angle P / 2) for the Pauli P of the axis.
struct Rotation {
  Axis axis;
  unsigned qubit;
  double angle;
};

struct ControlledZ {
  unsigned q1;
  unsigned q2;
};

struct Hadamard {
  unsigned qubit;
};

/// amps[z] *= exp(-i angle cost(z)) for a real cost on basis states.
struct DiagonalPhase {
  std::function<double(std::uint64_t)> cost;
  double angle;
};

using Gate = std::variant<Rotation, ControlledZ, Hadamard, DiagonalPhase>;

Mat2 rotation_matrix(Axis axis, double angle);
Mat2 hadamard_matrix();
/// Inverse gate: negated angles; CZ and Hadamard are self-inverse.
Gate inverse(const Gate& gate);

/// Dense n-qubit pure state; qubit q is bit q of the basis index.
class StateVector {
 public:
  static constexpr unsigned kMaxQubits = 20;

  /// |0...0>.
  explicit StateVector(unsigned n_qubits);

  unsigned n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  /// Mutable access for tests and custom state preparation.
  std::span<Amplitude> amplitudes_mut() { return amps_; }

  void apply(const Gate& gate);
  void apply_1q(unsigned qubit, const Mat2& m);
  void apply_cz(unsigned q1, unsigned q2);
  void apply_diagonal(std::span<const Amplitude> diag);

  std::vector<double> probabilities() const;
  double norm_squared() const;
  /// sum_z |amp_z|^2 values[z] for a diagonal observable.
  double expectation(std::span<const double> values) const;

 private:
  void check_qubit(unsigned q) const;

  unsigned n_qubits_;
  std::vector<Amplitude> amps_;
};

inline void apply_gate(StateVector& state, const Gate& gate) { state.apply(gate); }

/// Inverse-CDF sampler over a frozen outcome distribution. The prefix sums are
/// built once; draws are const and thread-safe given per-thread streams.
class OutcomeSampler {
 public:
  explicit OutcomeSampler(std::span<const double> probabilities);

  std::uint64_t draw(Rng& rng) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

}  // namespace rrb::qsim
