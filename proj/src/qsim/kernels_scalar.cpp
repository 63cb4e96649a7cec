#include "rrb/qsim/kernels.hpp"

// Complex arithmetic is spelled out so the operation order matches the
// vector kernels exactly; std::complex multiplication adds NaN handling.

namespace rrb::qsim {

namespace {

struct Cx {
  double re, im;
};

inline Cx load(const Amplitude& a) { return {a.real(), a.imag()}; }

inline Cx mul(Cx x, Cx y) { return {x.re * y.re - x.im * y.im, x.im * y.re + x.re * y.im}; }

inline Cx add(Cx x, Cx y) { return {x.re + y.re, x.im + y.im}; }

void apply_1q(Amplitude* amps, std::size_t n_amps, unsigned q, const Mat2& m) {
  const std::size_t stride = std::size_t{1} << q;
  const Cx m00 = load(m.m00), m01 = load(m.m01), m10 = load(m.m10), m11 = load(m.m11);
  for (std::size_t base = 0; base < n_amps; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Cx a = load(amps[i]);
      const Cx b = load(amps[i + stride]);
      const Cx na = add(mul(m00, a), mul(m01, b));
      const Cx nb = add(mul(m10, a), mul(m11, b));
      amps[i] = {na.re, na.im};
      amps[i + stride] = {nb.re, nb.im};
    }
  }
}

void apply_phase_flip(Amplitude* amps, std::size_t n_amps, std::size_t mask) {
  for (std::size_t i = 0; i < n_amps; ++i) {
    if ((i & mask) == mask) amps[i] = {-amps[i].real(), -amps[i].imag()};
  }
}

void apply_diagonal(Amplitude* amps, const Amplitude* diag, std::size_t n_amps) {
  for (std::size_t i = 0; i < n_amps; ++i) {
    const Cx r = mul(load(amps[i]), load(diag[i]));
    amps[i] = {r.re, r.im};
  }
}

void probabilities(const Amplitude* amps, double* out, std::size_t n_amps) {
  for (std::size_t i = 0; i < n_amps; ++i) {
    out[i] = amps[i].real() * amps[i].real() + amps[i].imag() * amps[i].imag();
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", apply_1q, apply_phase_flip, apply_diagonal,
                                 probabilities, dot};
  return table;
}

}  // namespace rrb::qsim
