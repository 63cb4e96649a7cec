#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rrb/core/bandit.hpp"
#include "rrb/core/error.hpp"
#include "rrb/core/interval_set.hpp"
#include "rrb/core/rng.hpp"
#include "rrb/core/trace.hpp"

namespace rrb {
namespace {

// Reference membership: a plain scan over the interval list.
bool naive_contains(const std::vector<Interval>& list, double x) {
  for (const auto& iv : list) {
    if (iv.lo <= x && x <= iv.hi) return true;
  }
  return false;
}

IntervalSet random_set(Rng& rng, int max_pieces) {
  std::vector<Interval> pieces;
  const int n = static_cast<int>(rng.uniform() * max_pieces);
  for (int i = 0; i < n; ++i) {
    const double a = rng.uniform(), b = rng.uniform();
    pieces.push_back({std::min(a, b), std::max(a, b)});
  }
  return IntervalSet(pieces);
}

void expect_intervals(const IntervalSet& s, std::vector<Interval> want) {
  ASSERT_EQ(s.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(s.intervals()[i].lo, want[i].lo, 1e-15);
    EXPECT_NEAR(s.intervals()[i].hi, want[i].hi, 1e-15);
  }
}

TEST(IntervalSet, SubtractSingleCut) {
  expect_intervals(interval_subtract(IntervalSet::unit(), IntervalSet{{0.25, 0.5}}),
                   {{0.0, 0.25}, {0.5, 1.0}});
}

TEST(IntervalSet, SubtractEmptyIsIdentity) {
  EXPECT_EQ(interval_subtract(IntervalSet::unit(), IntervalSet{}), IntervalSet::unit());
}

TEST(IntervalSet, SubtractAcrossGap) {
  const IntervalSet a{{0.0, 0.5}, {0.6, 1.0}};
  const IntervalSet b{{0.4, 0.7}};
  const auto diff = interval_subtract(a, b);
  expect_intervals(diff, {{0.0, 0.4}, {0.7, 1.0}});
  // Grid membership away from the boundary points.
  for (int i = 0; i <= 10'000; ++i) {
    const double x = i / 10'000.0;
    if (std::abs(x - 0.4) < 1e-9 || std::abs(x - 0.7) < 1e-9) continue;
    const bool want = (naive_contains({{0.0, 0.5}, {0.6, 1.0}}, x) && !(x >= 0.4 && x <= 0.7));
    EXPECT_EQ(diff.contains(x), want) << x;
  }
}

TEST(IntervalSet, Measure) {
  EXPECT_DOUBLE_EQ(interval_measure(IntervalSet::unit()), 1.0);
  EXPECT_DOUBLE_EQ(interval_measure(IntervalSet{}), 0.0);
  EXPECT_DOUBLE_EQ(interval_measure(IntervalSet{{0.0, 0.25}, {0.5, 1.0}}), 0.75);
}

TEST(IntervalSet, ContainsClosedEnds) {
  EXPECT_TRUE(interval_contains(IntervalSet{{0.0, 0.5}}, 0.5));
  EXPECT_FALSE(interval_contains(IntervalSet{{0.0, 0.5}}, 0.75));
  EXPECT_FALSE(interval_contains(IntervalSet{{0.0, 0.25}, {0.5, 1.0}}, 0.3));
}

TEST(IntervalSet, TouchingIntervalsMerge) {
  const IntervalSet s{{0.5, 0.75}, {0.0, 0.25}, {0.25, 0.5}};
  expect_intervals(s, {{0.0, 0.75}});
}

TEST(IntervalSet, ClampsToUnitAndRejectsReversed) {
  expect_intervals(IntervalSet{{-0.5, 0.25}, {0.9, 1.5}}, {{0.0, 0.25}, {0.9, 1.0}});
  EXPECT_THROW(IntervalSet({{0.6, 0.4}}), InvalidArgument);
}

TEST(IntervalSet, InclusionExclusionOnRandomSets) {
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = random_set(rng, 6);
    const auto b = random_set(rng, 6);
    EXPECT_NEAR(a.subtract(b).measure() + a.intersect(b).measure(), a.measure(), 1e-12);
    EXPECT_LE(a.unite(b).measure(), 1.0 + 1e-12);
  }
}

TEST(IntervalSet, ContainsMatchesBruteForce) {
  Rng rng(11);
  for (int trial = 0; trial < 100'000; ++trial) {
    std::vector<Interval> raw;
    const int n = 1 + static_cast<int>(rng.uniform() * 4);
    for (int i = 0; i < n; ++i) {
      const double a = rng.uniform(), b = rng.uniform();
      raw.push_back({std::min(a, b), std::max(a, b)});
    }
    const IntervalSet s(raw);
    const double x = rng.uniform();
    ASSERT_EQ(s.contains(x), naive_contains(raw, x));
  }
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.normal(), b.normal());
}

TEST(Rng, ChildIgnoresParentPosition) {
  Rng a(5), b(5);
  for (int i = 0; i < 17; ++i) b.uniform();
  Rng ca = a.child(3), cb = b.child(3);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(ca.uniform(), cb.uniform());
  EXPECT_NE(a.child(3).uniform(), a.child(4).uniform());
}

TEST(Rng, BinomialEdgeCases) {
  Rng r(1);
  EXPECT_EQ(r.binomial(0, 0.3), 0u);
  EXPECT_EQ(r.binomial(10, 0.0), 0u);
  EXPECT_EQ(r.binomial(10, 1.0), 10u);
}

TEST(GaussianBandit, ZeroNoiseIsExact) {
  GaussianBandit b([](std::span<const double> x) { return x[0] * x[0]; }, 0.0, 2.0);
  Rng rng(1);
  const double x[] = {0.3};
  EXPECT_DOUBLE_EQ(b.sample(x, rng), 0.09);
  EXPECT_DOUBLE_EQ(b.sample_mean(x, 1000, rng), 0.09);
  EXPECT_DOUBLE_EQ(*b.mean(x), 0.09);
}

TEST(GaussianBandit, BatchMeanHasTheRightSpread) {
  GaussianBandit b([](std::span<const double>) { return 0.5; }, 1.0, 1.0);
  Rng rng(3);
  const double x[] = {0.1};
  constexpr int kTrials = 20'000;
  constexpr std::uint64_t kN = 400;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < kTrials; ++i) {
    const double m = b.sample_mean(x, kN, rng);
    sum += m;
    sq += m * m;
  }
  const double mean = sum / kTrials;
  const double var = sq / kTrials - mean * mean;
  EXPECT_NEAR(mean, 0.5, 4.0 * 0.05 / std::sqrt(kTrials));
  EXPECT_NEAR(var, 1.0 / kN, 0.05 / kN);
}

TEST(GaussianBandit, RejectsLargeSigma) {
  EXPECT_THROW(GaussianBandit([](std::span<const double>) { return 0.0; }, 1.5, 1.0),
               InvalidArgument);
}

TEST(CountingBandit, TalliesSamplesAndOracleSeparately) {
  GaussianBandit inner([](std::span<const double>) { return 0.0; }, 1.0, 1.0);
  CountingBandit counted(inner);
  Rng rng(1);
  const double x[] = {0.5};
  counted.sample(x, rng);
  counted.sample_mean(x, 99, rng);
  counted.mean(x);
  counted.mean(x);
  EXPECT_EQ(counted.samples(), 100u);
  EXPECT_EQ(counted.oracle_calls(), 2u);
}

TEST(SampleBudget, ChargesAndRefusesOverdraft) {
  SampleBudget b(100);
  b.charge(60);
  EXPECT_EQ(b.used(), 60u);
  EXPECT_TRUE(b.can_afford(40));
  EXPECT_FALSE(b.can_afford(41));
  EXPECT_THROW(b.charge(41), BudgetExhausted);
  EXPECT_EQ(b.used(), 60u);
}

TEST(Trace, CsvLayout) {
  std::vector<StepRecord> trace = {{1, {0.6, -0.8}, true, 0.25, 1000, {0.1, 0.2}},
                                   {2, {1.0, 0.0}, false, 0.25, 2000, {0.1, 0.2}}};
  std::ostringstream out;
  write_step_csv(out, trace);
  EXPECT_EQ(out.str(),
            "step,direction,accepted,incumbent_value,cumulative_samples\n"
            "1,0.59999999999999998 -0.80000000000000004,1,0.25,1000\n"
            "2,1 0,0,0.25,2000\n");
}

TEST(Trace, StopReasonNames) {
  EXPECT_EQ(to_string(StopReason::budget_exhausted), "budget_exhausted");
  EXPECT_EQ(to_string(StopReason::callback), "callback");
}

}  // namespace
}  // namespace rrb
