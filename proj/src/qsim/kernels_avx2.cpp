#include "rrb/qsim/kernels.hpp"

#if defined(RRB_HAVE_AVX2)

#include <immintrin.h>

namespace rrb::qsim {

namespace {

// Two complex doubles per register: [re0, im0, re1, im1].

/// x * y per complex lane, y given as duplicated real and imaginary parts.
inline __m256d cmul(__m256d x, __m256d y_re, __m256d y_im) {
  const __m256d t1 = _mm256_mul_pd(x, y_re);
  const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(x, 0x5), y_im);
  return _mm256_addsub_pd(t1, t2);
}

inline __m256d cmul(__m256d x, __m256d y) {
  return cmul(x, _mm256_movedup_pd(y), _mm256_permute_pd(y, 0xF));
}

inline double* raw(Amplitude* a) { return reinterpret_cast<double*>(a); }
inline const double* raw(const Amplitude* a) { return reinterpret_cast<const double*>(a); }

void apply_1q(Amplitude* amps, std::size_t n_amps, unsigned q, const Mat2& m) {
  const std::size_t stride = std::size_t{1} << q;
  double* p = raw(amps);
  if (stride == 1) {
    // Pair (a, b) sits in one register.
    const __m256d c0 = _mm256_setr_pd(m.m00.real(), m.m00.imag(), m.m10.real(), m.m10.imag());
    const __m256d c1 = _mm256_setr_pd(m.m01.real(), m.m01.imag(), m.m11.real(), m.m11.imag());
    const __m256d c0_re = _mm256_movedup_pd(c0), c0_im = _mm256_permute_pd(c0, 0xF);
    const __m256d c1_re = _mm256_movedup_pd(c1), c1_im = _mm256_permute_pd(c1, 0xF);
    for (std::size_t i = 0; i < n_amps; i += 2) {
      const __m256d v = _mm256_loadu_pd(p + 2 * i);
      const __m256d aa = _mm256_permute2f128_pd(v, v, 0x00);
      const __m256d bb = _mm256_permute2f128_pd(v, v, 0x11);
      const __m256d r = _mm256_add_pd(cmul(aa, c0_re, c0_im), cmul(bb, c1_re, c1_im));
      _mm256_storeu_pd(p + 2 * i, r);
    }
    return;
  }
  const __m256d m00_re = _mm256_set1_pd(m.m00.real()), m00_im = _mm256_set1_pd(m.m00.imag());
  const __m256d m01_re = _mm256_set1_pd(m.m01.real()), m01_im = _mm256_set1_pd(m.m01.imag());
  const __m256d m10_re = _mm256_set1_pd(m.m10.real()), m10_im = _mm256_set1_pd(m.m10.imag());
  const __m256d m11_re = _mm256_set1_pd(m.m11.real()), m11_im = _mm256_set1_pd(m.m11.imag());
  for (std::size_t base = 0; base < n_amps; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      const __m256d a = _mm256_loadu_pd(p + 2 * i);
      const __m256d b = _mm256_loadu_pd(p + 2 * (i + stride));
      const __m256d na = _mm256_add_pd(cmul(a, m00_re, m00_im), cmul(b, m01_re, m01_im));
      const __m256d nb = _mm256_add_pd(cmul(a, m10_re, m10_im), cmul(b, m11_re, m11_im));
      _mm256_storeu_pd(p + 2 * i, na);
      _mm256_storeu_pd(p + 2 * (i + stride), nb);
    }
  }
}

void apply_phase_flip(Amplitude* amps, std::size_t n_amps, std::size_t mask) {
  double* p = raw(amps);
  const __m256d neg = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n_amps; i += 2) {
    const bool s0 = (i & mask) == mask;
    const bool s1 = ((i + 1) & mask) == mask;
    if (!s0 && !s1) continue;
    const __m256d lo = s0 ? neg : zero;
    const __m256d hi = s1 ? neg : zero;
    const __m256d sign = _mm256_permute2f128_pd(lo, hi, 0x20);
    _mm256_storeu_pd(p + 2 * i, _mm256_xor_pd(_mm256_loadu_pd(p + 2 * i), sign));
  }
}

void apply_diagonal(Amplitude* amps, const Amplitude* diag, std::size_t n_amps) {
  double* p = raw(amps);
  const double* d = raw(diag);
  std::size_t i = 0;
  for (; i + 2 <= n_amps; i += 2) {
    const __m256d r = cmul(_mm256_loadu_pd(p + 2 * i), _mm256_loadu_pd(d + 2 * i));
    _mm256_storeu_pd(p + 2 * i, r);
  }
  for (; i < n_amps; ++i) {
    const double xr = amps[i].real(), xi = amps[i].imag();
    const double yr = diag[i].real(), yi = diag[i].imag();
    amps[i] = {xr * yr - xi * yi, xi * yr + xr * yi};
  }
}

void probabilities(const Amplitude* amps, double* out, std::size_t n_amps) {
  const double* p = raw(amps);
  std::size_t i = 0;
  for (; i + 4 <= n_amps; i += 4) {
    const __m256d v1 = _mm256_loadu_pd(p + 2 * i);
    const __m256d v2 = _mm256_loadu_pd(p + 2 * i + 4);
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v1, v1), _mm256_mul_pd(v2, v2));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; i < n_amps; ++i) {
    out[i] = amps[i].real() * amps[i].real() + amps[i].imag() * amps[i].imag();
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2", apply_1q, apply_phase_flip, apply_diagonal,
                                 probabilities, dot};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace rrb::qsim

#else

namespace rrb::qsim {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace rrb::qsim

#endif
