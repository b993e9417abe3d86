#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "hc3/asymptotic_series.hpp"
#include "hc3/puiseux_series.hpp"
#include "property.hpp"

using namespace hc3;
using hc3::testing::for_all;
using hc3::testing::Gen;
using Rat = boost::multiprecision::cpp_rational;
using RSeries = PuiseuxSeries<Rat, 8>;

namespace {

// Random series whose coefficients are small dyadic rationals, so the same
// values exist exactly in double and in cpp_rational.
struct Pair {
  Series d;
  RSeries r;
};

Pair random_series(Gen& g, int lowest, int length, int trunc) {
  std::vector<double> dc;
  std::vector<Rat> rc;
  for (int i = 0; i < length; ++i) {
    const int num = g.integer(-64, 64);
    dc.push_back(num / 16.0);
    rc.push_back(Rat(num, 16));
  }
  return {Series(lowest, dc, trunc), RSeries(lowest, rc, trunc)};
}

ExpansionInputs inputs(double k2 = 0.0, std::vector<double> zeta = {}) {
  return {0.5901061249, 0.2540681072, 1.0, k2, std::move(zeta)};
}

}  // namespace

TEST(Puiseux, NormalizationStripsZerosAndTruncates) {
  const Series s(-2, {0.0, 0.0, 1.5, 0.0, 2.0, 0.0}, 1);
  EXPECT_EQ(s.lowest_exponent(), 0);
  EXPECT_EQ(s.highest_exponent(), 0);  // the 2.0 at exponent 2 lies past the truncation
  EXPECT_EQ(s[0], 1.5);
  EXPECT_EQ(s[7], 0.0);
  EXPECT_TRUE(Series(5).is_zero());
  EXPECT_THROW(s.truncated(3), InvalidArgument);
  EXPECT_EQ(s.shifted(4).lowest_exponent(), 4);
  EXPECT_EQ(s.shifted(4).truncation_order(), 5);
}

TEST(Puiseux, DifferenceOfSquares) {
  const Series one = Series::constant(1.0, 4), x = Series::monomial(1.0, 1, 4);
  const Series p = (one + x) * (one - x);
  EXPECT_EQ(p, one - x * x);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[2], -1.0);
}

TEST(Puiseux, TruncationMismatchIsRejected) {
  EXPECT_THROW(Series::constant(1.0, 3) + Series::constant(1.0, 4), InvalidArgument);
  EXPECT_THROW(Series::constant(1.0, 3) * Series::constant(1.0, 4), InvalidArgument);
}

TEST(Puiseux, RingLawsHoldExactly) {
  for_all(50, 41, [](Gen& g, int) {
    const int t = g.integer(4, 20);
    const Pair a = random_series(g, g.integer(-3, 3), g.integer(1, 8), t);
    const Pair b = random_series(g, g.integer(-3, 3), g.integer(1, 8), t);
    EXPECT_EQ(a.d + b.d, b.d + a.d);
    EXPECT_EQ(a.d * b.d, b.d * a.d);
    // associativity for power series: exact in rationals, within 1e-14 per
    // coefficient in doubles
    const Pair x = random_series(g, g.integer(0, 3), g.integer(1, 8), t);
    const Pair y = random_series(g, g.integer(0, 3), g.integer(1, 8), t);
    const Pair z = random_series(g, g.integer(0, 3), g.integer(1, 8), t);
    EXPECT_EQ((x.r * y.r) * z.r, x.r * (y.r * z.r));
    const Series l = (x.d * y.d) * z.d, r = x.d * (y.d * z.d);
    for (int k = 0; k <= t; ++k) EXPECT_NEAR(l[k], r[k], 1e-14 * std::max(1.0, std::abs(l[k])));
  });
}

TEST(Puiseux, NegativeValuationLowersTheProductTruncation) {
  const Series a = Series::monomial(1.0, -3, 10);
  const Series b(0, std::vector<double>(11, 1.0), 10);
  const Series p = a * b;
  EXPECT_EQ(p.truncation_order(), 7);
  EXPECT_EQ(p.lowest_exponent(), -3);
  EXPECT_EQ(p.highest_exponent(), 7);
}

TEST(Puiseux, DoubleArithmeticMatchesRationalOracle) {
  for_all(30, 42, [](Gen& g, int) {
    const int t = g.integer(6, 24);
    const Pair a = random_series(g, 0, g.integer(1, 6), t);
    const Pair s = random_series(g, g.integer(1, 3), g.integer(1, 6), t);
    const int num = g.integer(-8, 8);
    const RSeries exact = a.r * fractional_power(s.r, Rational{num, 8});
    const Series approx = a.d * fractional_power(s.d, Rational{num, 8});
    // coefficients are sums with cancellation; scale by the largest seen so far
    double scale = 1.0;
    for (int k = 0; k <= t; ++k) {
      const double e = exact[k].convert_to<double>();
      scale = std::max(scale, std::abs(e));
      EXPECT_LE(std::abs(approx[k] - e), 1e-12 * scale) << k;
    }
  });
}

TEST(Puiseux, FractionalPowerIdentities) {
  const RSeries one = RSeries::constant(Rat(1), 12), x = RSeries::monomial(Rat(1), 1, 12);
  const RSeries root = fractional_power(x, Rational{1, 2});
  EXPECT_EQ(root * root, one + x);
  const RSeries inv = fractional_power(x, Rational{-1, 1});
  for (int k = 0; k <= 12; ++k) EXPECT_EQ(inv[k], Rat(k % 2 == 0 ? 1 : -1));
  EXPECT_THROW(fractional_power(RSeries::constant(Rat(1), 4), Rational{1, 2}), InvalidArgument);

  // (1 + c / kappa)^{1/4}: first-order coefficient c / 4 on the kappa^{-1/8} lattice
  const double c = 0.2540681072 / std::sqrt(0.5901061249);
  const Series q = fractional_power(Series::monomial(c, 8, 24), Rational{1, 4});
  EXPECT_DOUBLE_EQ(q[8], c / 4.0);
}

TEST(Inversion, LeadingTermsMatchClosedForms) {
  const ExpansionInputs in = inputs(0.7, {0.3, -0.2});
  const CriticalFieldSeries inv = invert_critical_field(in, 8);
  EXPECT_DOUBLE_EQ(inv.H[-8], 1.0 / in.theta0);
  EXPECT_DOUBLE_EQ(inv.H[0], in.C1 * in.k_max / std::pow(in.theta0, 1.5));
  EXPECT_DOUBLE_EQ(inv.H[4], -in.C1 * std::sqrt(1.5 * in.k2) / in.theta0);
  for (int e = -7; e < 0; ++e) EXPECT_EQ(inv.H[e], 0.0);
}

TEST(Inversion, ResubstitutionLeavesNoRetainedResidual) {
  for_all(10, 43, [](Gen& g, int) {
    const int M = g.integer(0, 8);
    const ExpansionInputs in = inputs(g.uniform(0.0, 2.0), g.vector(static_cast<std::size_t>(M + 1), -1.0, 1.0));
    const Series lam = lambda1_series(in, M);
    const CriticalFieldSeries inv = invert_critical_field(lam, M);
    const Series r = resubstitution_residual(lam, inv);
    for (int p = 0; p <= r.truncation_order(); ++p) EXPECT_LE(std::abs(r[p]), 1e-12) << p;
  });
}

// With k2 = 0 and zeta = 0 the equation Theta0 B - C1 sqrt(B) = kappa^2 is
// solvable in closed form:
//   Theta0 H / kappa = 1 + (c / kappa) sqrt(1 + c^2 / (4 kappa^2)) + c^2 / (2 kappa^2),
// c = C1 / sqrt(Theta0). So eta_1 = c^2/2, eta_5 = c^3/8, eta_13 = -c^5/128
// and every other eta_j through j = 16 vanishes.
TEST(Inversion, DegenerateInputMatchesClosedFormSolution) {
  const ExpansionInputs in = inputs();
  const CriticalFieldSeries inv = invert_critical_field(in, 16);
  const double c = in.C1 / std::sqrt(in.theta0);
  std::vector<double> expected(17, 0.0);
  expected[1] = c * c / 2.0;
  expected[5] = c * c * c / 8.0;
  expected[13] = -std::pow(c, 5) / 128.0;
  ASSERT_EQ(inv.eta.size(), 17u);
  for (int j = 0; j <= 16; ++j) EXPECT_NEAR(inv.eta[static_cast<std::size_t>(j)], expected[static_cast<std::size_t>(j)], 1e-15) << j;
}

TEST(Inversion, ExtendingTheOrderKeepsEarlierCoefficients) {
  const std::vector<double> zeta{0.4, -0.1, 0.25, 0.05, -0.3, 0.2, 0.1, 0.0, -0.05, 0.07, 0.01, 0.02, -0.02};
  const CriticalFieldSeries small = invert_critical_field(inputs(1.1, zeta), 5);
  const CriticalFieldSeries large = invert_critical_field(inputs(1.1, zeta), 12);
  for (std::size_t j = 0; j < small.eta.size(); ++j) EXPECT_EQ(small.eta[j], large.eta[j]) << j;
}

TEST(Inversion, ScalingRouteGivesIdenticalCoefficients) {
  const ExpansionInputs in = inputs(0.9, {0.2, 0.1, -0.3, 0.05});
  for (int M : {0, 3, 8}) {
    const CriticalFieldSeries direct = invert_critical_field(lambda1_series(in, M), M);
    const CriticalFieldSeries scaled = invert_critical_field(lambda1_from_mu(mu_series(in, M)), M);
    EXPECT_EQ(direct.eta, scaled.eta) << M;
    EXPECT_EQ(direct.H, scaled.H) << M;
  }
}

TEST(Inversion, AgreesWithBernoffSternbergThroughInverseSquareRoot) {
  for (double k2 : {0.0, 0.35, 2.0}) {
    const ExpansionInputs in = inputs(k2, {0.5, 0.5});
    const CriticalFieldSeries inv = invert_critical_field(in, 4);
    const Series bs = bernoff_sternberg(in);
    for (int e = -8; e <= 4; ++e) EXPECT_NEAR(inv.H[e], bs[e], 4 * std::numeric_limits<double>::epsilon()) << e;
    if (k2 == 0.0) {
      EXPECT_EQ(inv.H[4], 0.0);
      EXPECT_EQ(bs[4], 0.0);
    }
  }
}

TEST(Inversion, RejectsInvalidInputs) {
  EXPECT_THROW(invert_critical_field(inputs(), -1), InvalidArgument);
  EXPECT_THROW(invert_critical_field(lambda1_series(inputs(), 2), 6), InvalidArgument);
  ExpansionInputs bad = inputs();
  bad.k2 = -1.0;
  EXPECT_THROW(lambda1_series(bad, 2), InvalidArgument);
  bad = inputs();
  bad.theta0 = 1.5;
  EXPECT_THROW(bernoff_sternberg(bad), InvalidArgument);
}
