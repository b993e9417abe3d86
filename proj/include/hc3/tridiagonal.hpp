#pragma once

// Symmetric tridiagonal toolkit: Sturm-sequence bisection for the lowest
// eigenvalue, inverse iteration for its eigenvector, and banded solves.
// Every discretization in the library reduces to this form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "hc3/error.hpp"

namespace hc3 {

/// Symmetric tridiagonal matrix: `diag` has n entries, `off` has n-1
/// (off[i] couples rows i and i+1).
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }

  std::vector<double> apply(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = diag[i] * x[i];
      if (i > 0) acc += off[i - 1] * x[i - 1];
      if (i + 1 < n) acc += off[i] * x[i + 1];
      y[i] = acc;
    }
    return y;
  }
};

/// Reduces the generalized problem K v = e M v with diagonal M > 0 to the
/// standard form M^{-1/2} K M^{-1/2}.
inline SymTridiag symmetrize(const SymTridiag& stiffness, std::span<const double> mass) {
  const std::size_t n = stiffness.size();
  require(mass.size() == n, "symmetrize: mass size mismatch");
  SymTridiag s;
  s.diag.resize(n);
  s.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    require(mass[i] > 0.0, "symmetrize: mass matrix must be positive");
    s.diag[i] = stiffness.diag[i] / mass[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) s.off[i] = stiffness.off[i] / std::sqrt(mass[i] * mass[i + 1]);
  return s;
}

/// Number of eigenvalues strictly below x.
inline std::size_t sturm_count(const SymTridiag& t, double x) {
  const std::size_t n = t.size();
  constexpr double tiny = std::numeric_limits<double>::min() * 1e4;
  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(q) < tiny) q = -tiny;
    q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

/// Gershgorin interval containing the whole spectrum.
inline std::pair<double, double> gershgorin(const SymTridiag& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < n) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

/// Lowest eigenvalue by bisection on the Sturm count, to full double
/// precision. `upper_hint`, when finite, must be an upper bound (e.g. a
/// Rayleigh quotient) and shortens the bracket.
inline double lowest_eigenvalue(const SymTridiag& t,
                                double upper_hint = std::numeric_limits<double>::infinity()) {
  require(t.size() > 0, "lowest_eigenvalue: empty matrix");
  auto [lo, hi] = gershgorin(t);
  hi = std::min(hi, *std::min_element(t.diag.begin(), t.diag.end()));
  if (std::isfinite(upper_hint)) hi = std::min(hi, upper_hint);
  // hi is a Rayleigh quotient, so at least one eigenvalue lies at or below it.
  hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return hi;
    if (sturm_count(t, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw SolverError("lowest_eigenvalue: bisection did not converge");
}

/// Solves (T - shift) x = b by Gaussian elimination with partial pivoting.
/// Exactly singular pivots are nudged, which is what inverse iteration wants.
inline std::vector<double> solve_shifted(const SymTridiag& t, double shift, std::span<const double> b) {
  const std::size_t n = t.size();
  std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, 0.0), x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dl[i] = t.off[i];
    du[i] = t.off[i];
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(t.diag[i]) + std::abs(shift));
  const double nudge = std::max(scale, 1.0) * std::numeric_limits<double>::epsilon();

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = nudge;
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
      x[i + 1] -= f * x[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      std::swap(x[i], x[i + 1]);
      x[i + 1] -= f * x[i];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = nudge;
  x[n - 1] /= d[n - 1];
  if (n >= 2) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
  if (n >= 3) {
    for (std::size_t k = n - 2; k-- > 0;) {
      x[k] = (x[k] - du[k] * x[k + 1] - du2[k] * x[k + 2]) / d[k];
    }
  }
  return x;
}

/// Thomas algorithm; valid for positive definite T.
inline std::vector<double> solve_spd(const SymTridiag& t, std::span<const double> b) {
  const std::size_t n = t.size();
  std::vector<double> c(n), x(b.begin(), b.end());
  double denom = t.diag[0];
  if (!(denom > 0.0)) throw SolverError("solve_spd: matrix not positive definite");
  c[0] = n > 1 ? t.off[0] / denom : 0.0;
  x[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = t.diag[i] - t.off[i - 1] * c[i - 1];
    if (!(denom > 0.0)) throw SolverError("solve_spd: matrix not positive definite");
    c[i] = i + 1 < n ? t.off[i] / denom : 0.0;
    x[i] = (x[i] - t.off[i - 1] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

inline double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

/// Unit eigenvector for a simple eigenvalue `lambda` (already accurate),
/// sign-normalized to a positive component sum.
inline std::vector<double> inverse_iteration(const SymTridiag& t, double lambda, int iterations = 3) {
  const std::size_t n = t.size();
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (int it = 0; it < iterations; ++it) {
    v = solve_shifted(t, lambda, v);
    const double nv = norm2(v);
    if (!std::isfinite(nv) || nv == 0.0) throw SolverError("inverse_iteration: breakdown");
    for (double& x : v) x /= nv;
  }
  if (std::accumulate(v.begin(), v.end(), 0.0) < 0.0) {
    for (double& x : v) x = -x;
  }
  return v;
}

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

inline EigenPair lowest_eigenpair(const SymTridiag& t) {
  EigenPair p;
  p.value = lowest_eigenvalue(t);
  p.vector = inverse_iteration(t, p.value);
  return p;
}

/// Two-grid Richardson extrapolation for a second-order quantity computed
/// at spacing h (coarse) and h/2 (fine).
inline double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace hc3
