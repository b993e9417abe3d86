#pragma once

// Test-side oracle for the half-line de Gennes operator, independent of the
// library's finite differences: the decaying solution of
// -u'' + (tau + zeta)^2 u = mu u is integrated from tau = L back to 0 with
// classical RK4 (backward integration of the recessive solution is stable),
// and mu is the root of u'(0) found by bisection.

#include <cmath>
#include <utility>
#include <vector>

namespace hc3::oracle {

struct Shot {
  double u0 = 0.0;   // u(0)
  double du0 = 0.0;  // u'(0)
  double mass = 0.0; // int_0^L u^2 (Simpson)
};

inline Shot shoot(double zeta, double mu, double L = 12.0, int steps = 24000) {
  const double h = -L / steps;
  auto rhs = [&](double t, double u, double v) {
    const double x = t + zeta;
    return std::pair<double, double>{v, (x * x - mu) * u};
  };
  double t = L;
  const double x = L + zeta;
  double u = 1e-30;
  double v = -std::sqrt(std::max(x * x - mu, 0.0)) * u;
  double mass = 0.0;
  double prev_sq = u * u;
  for (int i = 0; i < steps; ++i) {
    auto [k1u, k1v] = rhs(t, u, v);
    auto [k2u, k2v] = rhs(t + h / 2, u + h / 2 * k1u, v + h / 2 * k1v);
    auto [k3u, k3v] = rhs(t + h / 2, u + h / 2 * k2u, v + h / 2 * k2v);
    auto [k4u, k4v] = rhs(t + h, u + h * k3u, v + h * k3v);
    const double mid_u = u + h / 2 * k1u + h * h / 8 * k1v;  // Taylor midpoint
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    t += h;
    mass += -h / 6 * (prev_sq + 4 * mid_u * mid_u + u * u);
    prev_sq = u * u;
  }
  return {u, v, mass};
}

/// Lowest mu with u'(0) = 0, for zeta <= 0 (where it lies in (0, 1]).
/// Below it the decaying solution is positive and convex, so u'(0) < 0;
/// between it and the first Dirichlet level u'(0)/u(0) > 0; past that u(0) < 0.
inline double mu(double zeta, double L = 12.0) {
  double lo = 0.0, hi = 1.0 + 1e-6;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const Shot s = shoot(zeta, mid, L);
    const bool below = s.u0 > 0.0 && s.du0 < 0.0;
    if (below) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct Ground {
  double xi0, theta0, C1;
};

/// Minimizes mu over zeta by golden section; C1 = u(0)^2 / 3 for the
/// normalized decaying solution at the minimizer.
inline Ground ground() {
  double a = -1.2, b = -0.4;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = mu(x1), f2 = mu(x2);
  while (b - a > 1e-7) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1; x1 = b - r * (b - a); f1 = mu(x1);
    } else {
      a = x1; x1 = x2; f1 = f2; x2 = a + r * (b - a); f2 = mu(x2);
    }
  }
  const double xi = 0.5 * (a + b);
  const double th = mu(xi);
  const Shot s = shoot(xi, th);
  return {xi, th, s.u0 * s.u0 / s.mass / 3.0};
}

}  // namespace hc3::oracle
