#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace rrb::qsim {

using Amplitude = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
  Amplitude m00, m01, m10, m11;
};

/// Statevector inner loops. Every implementation must produce bitwise
/// identical results for the elementwise kernels; the reductions may differ
/// in summation order.
struct KernelTable {
  std::string_view name;
  /// Applies m to qubit q of a state with n_amps = 2^n amplitudes.
  void (*apply_1q)(Amplitude* amps, std::size_t n_amps, unsigned q, const Mat2& m);
  /// Negates every amplitude whose index has all bits of mask set.
  void (*apply_phase_flip)(Amplitude* amps, std::size_t n_amps, std::size_t mask);
  /// amps[i] *= diag[i].
  void (*apply_diagonal)(Amplitude* amps, const Amplitude* diag, std::size_t n_amps);
  /// out[i] = |amps[i]|^2.
  void (*probabilities)(const Amplitude* amps, double* out, std::size_t n_amps);
  /// sum_i a[i] * b[i].
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();
/// Null when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

enum class KernelChoice { automatic, scalar, avx2 };

/// Active table. Chosen once from CPU support unless the RRB_KERNELS
/// environment variable ("scalar" or "avx2") or select_kernels overrides it.
const KernelTable& kernels();

/// Returns false (and leaves the selection unchanged) if the requested
/// variant is unavailable.
bool select_kernels(KernelChoice choice);

}  // namespace rrb::qsim
