#include <gtest/gtest.h>

#include <cstring>
#include <vector>

#include "rrb/core/rng.hpp"
#include "rrb/qsim/kernels.hpp"
#include "rrb/qsim/state_vector.hpp"

namespace rrb::qsim {
namespace {

std::vector<Amplitude> random_amps(std::size_t n, Rng& rng) {
  std::vector<Amplitude> a(n);
  for (auto& z : a) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return a;
}

bool bitwise_equal(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(a[0])) == 0;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    simd_ = avx2_kernels();
    if (!simd_) GTEST_SKIP() << "AVX2 kernels unavailable on this build or CPU";
  }
  const KernelTable& ref_ = scalar_kernels();
  const KernelTable* simd_ = nullptr;
};

TEST_F(KernelEquivalence, SingleQubitGateIsBitwiseIdentical) {
  Rng rng(1);
  for (unsigned n = 1; n <= 10; ++n) {
    for (unsigned q = 0; q < n; ++q) {
      const auto base = random_amps(std::size_t{1} << n, rng);
      const Mat2 m{{rng.normal(), rng.normal()},
                   {rng.normal(), rng.normal()},
                   {rng.normal(), rng.normal()},
                   {rng.normal(), rng.normal()}};
      auto a = base, b = base;
      ref_.apply_1q(a.data(), a.size(), q, m);
      simd_->apply_1q(b.data(), b.size(), q, m);
      EXPECT_TRUE(bitwise_equal(a, b)) << "n=" << n << " q=" << q;
    }
  }
}

TEST_F(KernelEquivalence, PhaseFlipIsBitwiseIdentical) {
  Rng rng(2);
  for (unsigned n = 1; n <= 10; ++n) {
    for (std::size_t mask : {std::size_t{1}, std::size_t{3}, std::size_t{1} << (n - 1),
                             (std::size_t{1} << n) - 1}) {
      if (mask >= (std::size_t{1} << n)) continue;
      const auto base = random_amps(std::size_t{1} << n, rng);
      auto a = base, b = base;
      ref_.apply_phase_flip(a.data(), a.size(), mask);
      simd_->apply_phase_flip(b.data(), b.size(), mask);
      EXPECT_TRUE(bitwise_equal(a, b)) << "n=" << n << " mask=" << mask;
    }
  }
}

TEST_F(KernelEquivalence, DiagonalIsBitwiseIdentical) {
  Rng rng(3);
  for (std::size_t size : {1u, 2u, 3u, 4u, 7u, 16u, 1024u, 1025u}) {
    const auto base = random_amps(size, rng);
    const auto diag = random_amps(size, rng);
    auto a = base, b = base;
    ref_.apply_diagonal(a.data(), diag.data(), size);
    simd_->apply_diagonal(b.data(), diag.data(), size);
    EXPECT_TRUE(bitwise_equal(a, b)) << "size=" << size;
  }
}

TEST_F(KernelEquivalence, ProbabilitiesAreBitwiseIdentical) {
  Rng rng(4);
  for (std::size_t size : {1u, 2u, 3u, 5u, 8u, 1000u, 4096u}) {
    const auto amps = random_amps(size, rng);
    std::vector<double> a(size), b(size);
    ref_.probabilities(amps.data(), a.data(), size);
    simd_->probabilities(amps.data(), b.data(), size);
    EXPECT_EQ(std::memcmp(a.data(), b.data(), size * sizeof(double)), 0) << "size=" << size;
  }
}

TEST_F(KernelEquivalence, DotAgreesWithinRounding) {
  Rng rng(5);
  for (std::size_t size : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 65536u}) {
    std::vector<double> x(size), y(size);
    double magnitude = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      x[i] = rng.uniform(-1.0, 1.0);
      y[i] = rng.uniform(-1.0, 1.0);
      magnitude += std::abs(x[i] * y[i]);
    }
    EXPECT_NEAR(ref_.dot(x.data(), y.data(), size), simd_->dot(x.data(), y.data(), size),
                1e-14 * (magnitude + 1.0))
        << "size=" << size;
  }
}

TEST_F(KernelEquivalence, WholeCircuitsMatchAcrossTables) {
  Rng rng(6);
  std::vector<Gate> circuit;
  for (int i = 0; i < 400; ++i) {
    const unsigned q = static_cast<unsigned>(rng.uniform() * 7);
    if (i % 3 == 0) {
      circuit.push_back(ControlledZ{q, (q + 1) % 7});
    } else {
      circuit.push_back(Rotation{static_cast<Axis>(i % 3), q, rng.uniform(-3.0, 3.0)});
    }
  }
  auto run = [&] {
    StateVector s(7);
    for (const auto& g : circuit) s.apply(g);
    return std::vector<Amplitude>(s.amplitudes().begin(), s.amplitudes().end());
  };
  ASSERT_TRUE(select_kernels(KernelChoice::scalar));
  const auto a = run();
  ASSERT_TRUE(select_kernels(KernelChoice::avx2));
  const auto b = run();
  select_kernels(KernelChoice::automatic);
  EXPECT_TRUE(bitwise_equal(a, b));
}

TEST(KernelSelection, ScalarIsAlwaysAvailable) {
  EXPECT_TRUE(select_kernels(KernelChoice::scalar));
  EXPECT_EQ(kernels().name, scalar_kernels().name);
  EXPECT_TRUE(select_kernels(KernelChoice::automatic));
  if (avx2_kernels()) {
    EXPECT_EQ(kernels().name, avx2_kernels()->name);
  } else {
    EXPECT_FALSE(select_kernels(KernelChoice::avx2));
    EXPECT_EQ(kernels().name, scalar_kernels().name);
  }
}

}  // namespace
}  // namespace rrb::qsim
