#include <gtest/gtest.h>

#include <cmath>

#include "hc3/critical_field.hpp"
#include "hc3/parallel.hpp"
#include "reference.hpp"

using namespace hc3;

TEST(CriticalField, FrozenValueAtKappa10) {
  const Lambda1Cache cache;
  const CriticalFieldResult r = critical_field(10.0, cache);
  EXPECT_NEAR(r.H, reference::hc3_kappa10, 1e-7);
  EXPECT_LE(std::abs(r.residual), 1e-6 * 100.0);
  EXPECT_NEAR(cache(10.0 * r.H) - 100.0, r.residual, 1e-12);
  EXPECT_FALSE(r.flagged);
  EXPECT_NEAR(r.lower_local, r.upper_local, 1e-6 * r.upper_local);
  EXPECT_NEAR(r.lower_local, r.H, 1e-6 * r.H);
  // leading behaviour kappa / Theta0 + C1 / Theta0^{3/2} with an O(1/kappa) gap
  EXPECT_LT(std::abs(r.asymptotic_gap(cache.constants())) * 10.0, 1.0);
  EXPECT_GE(r.H, r.bracket.first);
  EXPECT_LE(r.H, r.bracket.second);
}

TEST(CriticalField, FieldGrowsWithKappaAndRootsAreTight) {
  const Lambda1Cache cache;
  double previous = 0.0;
  for (double kappa : {3.0, 5.0, 8.0}) {
    const CriticalFieldResult r = hc3_local(kappa, cache);
    EXPECT_GT(r.H, previous) << kappa;
    EXPECT_LE(std::abs(r.residual), 1e-6 * kappa * kappa) << kappa;
    previous = r.H;
  }
}

TEST(CriticalField, CacheMemoizesAndSurvivesConcurrentUse) {
  const Lambda1Cache cache;
  std::vector<double> Bs;
  for (int i = 0; i < 24; ++i) Bs.push_back(100.0 + 5.0 * (i % 8));  // each value requested three times
  const std::vector<double> values = parallel_map(Bs, [&](double B) { return cache(B); });
  EXPECT_EQ(cache.size(), 8u);
  for (std::size_t i = 0; i < Bs.size(); ++i) {
    EXPECT_EQ(values[i], lambda1_disc(Bs[i]).lambda1) << Bs[i];
    EXPECT_EQ(values[i], cache(Bs[i]));
  }
  EXPECT_EQ(cache.size(), 8u);
}

TEST(CriticalField, SmallSweepDetectsCoincidentLocalFields) {
  const Lambda1Cache cache;
  const Kappa0Detection d = detect_kappa0({2.0, 3.0, 4.0}, cache);
  EXPECT_TRUE(d.satisfied);
  EXPECT_EQ(d.kappa0, 2.0);
  ASSERT_EQ(d.coincident.size(), 3u);
  for (bool c : d.coincident) EXPECT_TRUE(c);
}

TEST(CriticalField, DefaultSweep) {
  const std::vector<double> k = default_kappa_sweep();
  ASSERT_EQ(k.size(), 20u);
  EXPECT_EQ(k.front(), 0.5);
  EXPECT_NEAR(k.back(), 10.0, 1e-12);
}

TEST(CriticalField, RejectsInvalidInput) {
  const Lambda1Cache cache;
  EXPECT_THROW(hc3_local(0.0, cache), InvalidArgument);
  EXPECT_THROW(hc3_local(-2.0, cache), InvalidArgument);
  EXPECT_THROW(local_fields(std::nan(""), cache), InvalidArgument);
  EXPECT_THROW(detect_kappa0({}, cache), InvalidArgument);
  EXPECT_THROW(detect_kappa0({3.0, 2.0}, cache), InvalidArgument);
}
