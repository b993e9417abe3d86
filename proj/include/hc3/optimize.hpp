#pragma once

// Derivative-free one-dimensional minimization and bracketed root finding.

#include <cmath>
#include <limits>
#include <utility>

#include "hc3/error.hpp"

namespace hc3 {

struct Minimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search on [a, b] down to bracket width `width`, followed
/// by one parabolic step through the final three points. f must be
/// unimodal on [a, b].
template <typename F>
Minimum golden_section_minimize(F&& f, double a, double b, double width) {
  require(a < b && width > 0.0, "golden_section_minimize: bad bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int iter = 0; b - a > width; ++iter) {
    if (iter > 500) throw SolverError("golden_section_minimize: no convergence");
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  Minimum best = f1 < f2 ? Minimum{x1, f1} : Minimum{x2, f2};

  // Parabola through (x1, f1), (x2, f2) and the midpoint.
  const double xm = 0.5 * (a + b);
  const double fm = f(xm);
  if (fm < best.value) best = {xm, fm};
  const double d1 = (x1 - xm) * (f1 - f2);
  const double d2 = (x1 - x2) * (f1 - fm);
  const double num = (x1 - xm) * d1 - (x1 - x2) * d2;
  const double den = 2.0 * (d1 - d2);
  if (den != 0.0) {
    const double xp = x1 - num / den;
    if (xp > a && xp < b) {
      const double fp = f(xp);
      if (fp <= best.value) best = {xp, fp};
    }
  }
  return best;
}

/// Bisection for a sign change of g on [lo, hi] until |g| <= residual_tol or
/// the bracket collapses, then secant polish kept inside the bracket.
template <typename G>
double bracketed_root(G&& g, double lo, double hi, double residual_tol, int max_iter = 200) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo < 0.0) == (ghi < 0.0)) throw SolverError("bracketed_root: no sign change in bracket");
  for (int iter = 0; iter < max_iter; ++iter) {
    // Secant candidate, falling back to the midpoint when it leaves the
    // middle 80% of the bracket.
    double x = hi - ghi * (hi - lo) / (ghi - glo);
    const double margin = 0.1 * (hi - lo);
    if (!(x > lo + margin && x < hi - margin) || iter % 3 == 2) x = 0.5 * (lo + hi);
    const double gx = g(x);
    if (std::abs(gx) <= residual_tol) return x;
    if ((gx < 0.0) == (glo < 0.0)) {
      lo = x;
      glo = gx;
    } else {
      hi = x;
      ghi = gx;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi)) {
      return std::abs(glo) < std::abs(ghi) ? lo : hi;
    }
  }
  throw SolverError("bracketed_root: no convergence");
}

}  // namespace hc3
