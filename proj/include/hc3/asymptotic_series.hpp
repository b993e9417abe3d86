#pragma once

// Formal inversion of lambda1(kappa H) = kappa^2.
//
// The eigenvalue is given as a series in B^{-1/8},
//   lambda1(B) = Theta0 B - C1 k B^{1/2} + C1 Theta0^{1/4} sqrt(3 k2 / 2) B^{1/4}
//                + B^{1/8} sum_j zeta_j B^{-j/8},
// and H is sought as (kappa / Theta0) S with S = 1 + sum_p s_p u^p, u = kappa^{-1/8}.
// With B = kappa^2 S / Theta0 every term c B^{p/8} becomes
// c Theta0^{-p/8} u^{16 - 2p} S^{p/8} after dividing by kappa^2, so
//   R(S) = lambda1(kappa H) / kappa^2 - 1
// has u^p coefficient s_p + (terms in s_q, q <= p - 8). Setting R_p = 0 order
// by order is a triangular recursion. eta_j = s_{14 + 2j}.

#include <cmath>
#include <cstddef>
#include <vector>

#include "hc3/constants.hpp"
#include "hc3/error.hpp"
#include "hc3/puiseux_series.hpp"

namespace hc3 {

using Series = PuiseuxSeries<double, 8>;

struct ExpansionInputs {
  double theta0 = 0.0;
  double C1 = 0.0;
  double k_max = 1.0;
  double k2 = 0.0;            // -k'' at the curvature maximum
  std::vector<double> zeta;   // zeta_j, j = 0..; missing entries are zero

  static ExpansionInputs from_constants(const DeGennesConstants& c, double k_max = 1.0, double k2 = 0.0,
                                        std::vector<double> zeta = {}) {
    return {c.theta0, c.C1, k_max, k2, std::move(zeta)};
  }

  void validate() const {
    require(theta0 > 0.5 && theta0 < 1.0, "ExpansionInputs: theta0 must lie in (0.5, 1)");
    require(C1 > 0.0, "ExpansionInputs: C1 must be positive");
    require(k2 >= 0.0, "ExpansionInputs: k2 must be nonnegative");
    require(std::isfinite(k_max), "ExpansionInputs: k_max must be finite");
  }

  double zeta_at(std::size_t j) const { return j < zeta.size() ? zeta[j] : 0.0; }

  /// Coefficient of the B^{1/4} (equivalently h^{7/4}) term.
  double quarter_coefficient() const { return C1 * std::pow(theta0, 0.25) * std::sqrt(1.5 * k2); }
};

/// Truncation (in units of 1/8) of the normalized series for M terms eta_0..eta_M.
inline int normalized_truncation(int M) { return 14 + 2 * M; }

/// lambda1(B) in powers of B^{-1/8}: exponent q stands for B^{-q/8}. The
/// zeta terms sit at q = j - 1, j = 0..M.
inline Series lambda1_series(const ExpansionInputs& in, int M) {
  in.validate();
  require(M >= 0, "lambda1_series: M must be nonnegative");
  const int trunc = M - 1;
  Series s(trunc);
  s = s + Series::monomial(in.theta0, -8, trunc);
  s = s + Series::monomial(-in.C1 * in.k_max, -4, trunc);
  s = s + Series::monomial(in.quarter_coefficient(), -2, trunc);
  for (int j = 0; j <= M; ++j) s = s + Series::monomial(in.zeta_at(j), j - 1, trunc);
  return s;
}

/// mu^(1)(h) in powers of h^{1/8}: exponent q stands for h^{q/8}.
inline Series mu_series(const ExpansionInputs& in, int M) {
  in.validate();
  require(M >= 0, "mu_series: M must be nonnegative");
  const int trunc = M + 15;
  Series s(trunc);
  s = s + Series::monomial(in.theta0, 8, trunc);
  s = s + Series::monomial(-in.C1 * in.k_max, 12, trunc);
  s = s + Series::monomial(in.quarter_coefficient(), 14, trunc);
  for (int j = 0; j <= M; ++j) s = s + Series::monomial(in.zeta_at(j), 15 + j, trunc);
  return s;
}

/// lambda1(B) = B^2 mu^(1)(1/B): h^{q/8} becomes B^{2 - q/8} = B^{-(q-16)/8}.
inline Series lambda1_from_mu(const Series& mu) { return mu.shifted(-16); }

/// R = lambda1(kappa H) / kappa^2 - 1 in powers of u = kappa^{-1/8}, for
/// H = (kappa / c) S where c is the B^1 coefficient of the eigenvalue series.
inline Series normalized_residual(const Series& lambda1, const Series& S, int trunc) {
  require(lambda1.lowest_exponent() == -8 && lambda1[-8] > 0.0,
          "normalized_residual: eigenvalue series must start with a positive B^1 term");
  const double lead = lambda1[-8];
  const Series one = Series::constant(1.0, trunc);
  const Series S_minus_1 = S - one;
  Series R = S_minus_1;
  for (int q = -7; q <= lambda1.highest_exponent(); ++q) {
    const double c = lambda1[q];
    if (c == 0.0) continue;
    const int p = -q;  // c B^{p/8}
    const int shift = 16 - 2 * p;
    if (shift > trunc) continue;
    const double factor = c * std::pow(lead, -static_cast<double>(p) / 8.0);
    const Series power = fractional_power(S_minus_1, Rational{p, 8});
    R = R + series_scale(power, factor).truncated(trunc - shift).shifted(shift).truncated(trunc);
  }
  return R;
}

struct CriticalFieldSeries {
  Series H;                 // in powers of kappa^{-1/8}, exponent -8 is kappa^1
  Series S;                 // Theta0 H / kappa
  std::vector<double> eta;  // eta_0..eta_M
  int M = 0;
};

/// Triangular solve of R(S) = 0 through u^{14 + 2M}.
inline CriticalFieldSeries invert_critical_field(const Series& lambda1, int M) {
  require(M >= 0, "invert_critical_field: M must be nonnegative");
  const int trunc = normalized_truncation(M);
  const int available = lambda1.truncation_order();
  // zeta_j enters R at u^{14 + 2j}, i.e. from eigenvalue exponent j - 1.
  if (available < M - 1) throw InvalidArgument("invert_critical_field: inconsistent truncations (eigenvalue series too short)");
  std::vector<double> s(static_cast<std::size_t>(trunc) + 1, 0.0);
  s[0] = 1.0;
  for (int p = 1; p <= trunc; ++p) {
    const Series S(0, s, trunc);
    const Series R = normalized_residual(lambda1, S, trunc);
    s[static_cast<std::size_t>(p)] -= R[p];
  }
  CriticalFieldSeries out;
  out.M = M;
  out.S = Series(0, s, trunc);
  const double lead = lambda1[-8];
  std::vector<double> h(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) h[i] = s[i] / lead;
  out.H = Series(-8, h, trunc - 8);
  for (int j = 0; j <= M; ++j) out.eta.push_back(s[static_cast<std::size_t>(14 + 2 * j)]);
  return out;
}

inline CriticalFieldSeries invert_critical_field(const ExpansionInputs& in, int M) {
  return invert_critical_field(lambda1_series(in, M), M);
}

/// Residual series of lambda1(kappa H) / kappa^2 - 1 for a computed inversion.
inline Series resubstitution_residual(const Series& lambda1, const CriticalFieldSeries& inv) {
  return normalized_residual(lambda1, inv.S, inv.S.truncation_order());
}

/// Three-term series of Bernoff and Sternberg, built from their variables
/// h_bar = 1/Theta0, J0 = sqrt(Theta0)/(3 C1), kappa_bar = k_max,
/// kappa_ss = -k2:
///   h_bar kappa + h_bar kappa_bar / (3 J0) - sqrt(-2 kappa_ss h_bar / 3) / (2 J0) kappa^{-1/2},
/// truncated below kappa^{-1}.
inline Series bernoff_sternberg(const ExpansionInputs& in) {
  in.validate();
  const double h_bar = 1.0 / in.theta0;
  const double J0 = std::sqrt(in.theta0) / (3.0 * in.C1);
  const double kappa_ss = -in.k2;
  constexpr int trunc = 7;
  Series s(trunc);
  s = s + Series::monomial(h_bar, -8, trunc);
  s = s + Series::monomial(h_bar * in.k_max / (3.0 * J0), 0, trunc);
  s = s + Series::monomial(-std::sqrt(-2.0 * kappa_ss * h_bar / 3.0) / (2.0 * J0), 4, trunc);
  return s;
}

}  // namespace hc3
