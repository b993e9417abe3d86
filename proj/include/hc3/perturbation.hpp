#pragma once

// Formal expansion of the collar operator around the de Gennes model:
//   h(delta, B) = h0 + B^{-1/2} h1 + B^{-1} h2 + O(B^{-3/2}),
//   h1 = d/dtau + 2 (tau + xi0)(delta - tau^2/2) + 2 tau (tau + xi0)^2,
//   h2 = tau d/dtau + (delta - tau^2/2)^2 + 4 tau (tau + xi0)(delta - tau^2/2)
//        + 3 tau^2 (tau + xi0)^2,
// the Rayleigh-Schroedinger coefficients lambda1, lambda2(delta), the
// correctors u1, u2 and the cut-off trial state built from them.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "hc3/collar_problem.hpp"
#include "hc3/error.hpp"
#include "hc3/model_operator.hpp"

namespace hc3 {

/// First derivative: central differences inside, second-order one-sided
/// formulas at both ends.
inline std::vector<double> derivative(const HalfLineGrid& grid, std::span<const double> v) {
  const std::size_t n = v.size();
  require(n == grid.points(), "derivative: size mismatch");
  const double h = grid.spacing();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return d;
}

inline std::vector<double> apply_h1(double delta, double xi0, const HalfLineGrid& grid, std::span<const double> v) {
  std::vector<double> out = derivative(grid, v);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = grid.node(i);
    const double s = t + xi0;
    out[i] += (2.0 * s * (delta - 0.5 * t * t) + 2.0 * t * s * s) * v[i];
  }
  return out;
}

inline std::vector<double> apply_h2(double delta, double xi0, const HalfLineGrid& grid, std::span<const double> v) {
  std::vector<double> out = derivative(grid, v);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = grid.node(i);
    const double s = t + xi0;
    const double q = delta - 0.5 * t * t;
    out[i] = t * out[i] + (q * q + 4.0 * t * s * q + 3.0 * t * t * s * s) * v[i];
  }
  return out;
}

struct CorrectionPair {
  std::vector<double> u1;
  std::vector<double> u2;
  double delta = 0.0;
};

/// Coefficients of the expansion at one delta. lambda2 = lambda2_1 + lambda2_2.
struct ExpansionTerms {
  double delta = 0.0;
  double lambda1 = 0.0;
  double lambda2_1 = 0.0;
  double lambda2_2 = 0.0;
  double lambda2 = 0.0;
  CorrectionPair correctors;
};

/// u0 must be the ground mode at xi0 (u0.zeta = xi0, u0.mu = Theta0).
inline ExpansionTerms expansion_terms(double delta, const GroundMode& u0) {
  const HalfLineGrid& grid = u0.grid;
  const double xi0 = u0.zeta;
  const std::span<const double> v0 = u0.samples;
  ExpansionTerms e;
  e.delta = delta;
  e.correctors.delta = delta;

  std::vector<double> h1u0 = apply_h1(delta, xi0, grid, v0);
  e.lambda1 = inner(grid, v0, h1u0);
  for (std::size_t i = 0; i < h1u0.size(); ++i) h1u0[i] -= e.lambda1 * v0[i];
  std::vector<double> u1 = regularized_resolvent(h1u0, u0);
  for (double& x : u1) x = -x;

  std::vector<double> h1u1 = apply_h1(delta, xi0, grid, u1);
  for (std::size_t i = 0; i < h1u1.size(); ++i) h1u1[i] -= e.lambda1 * u1[i];
  const std::vector<double> h2u0 = apply_h2(delta, xi0, grid, v0);
  e.lambda2_1 = inner(grid, v0, h2u0);
  e.lambda2_2 = inner(grid, v0, h1u1);
  e.lambda2 = e.lambda2_1 + e.lambda2_2;

  std::vector<double> rhs(h1u1.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = h1u1[i] + h2u0[i] - e.lambda2 * v0[i];
  std::vector<double> u2 = regularized_resolvent(rhs, u0);
  for (double& x : u2) x = -x;

  e.correctors.u1 = std::move(u1);
  e.correctors.u2 = std::move(u2);
  return e;
}

inline double lambda2(double delta, const GroundMode& u0) { return expansion_terms(delta, u0).lambda2; }

/// lambda2(delta) = a2 delta^2 + a1 delta + a0 = a2 ((delta - delta0)^2 + C0).
struct Lambda2Fit {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  double delta0 = 0.0;
  double C0 = 0.0;

  double operator()(double delta) const { return (a2 * delta + a1) * delta + a0; }
};

/// Exact quadratic through three (delta, lambda2) samples, then the completed
/// square.
inline Lambda2Fit fit_delta0_C0(const std::array<std::pair<double, double>, 3>& samples) {
  const auto [x0, y0] = samples[0];
  const auto [x1, y1] = samples[1];
  const auto [x2, y2] = samples[2];
  require(x0 != x1 && x1 != x2 && x0 != x2, "fit_delta0_C0: delta values must be distinct");
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  Lambda2Fit f;
  f.a2 = (d12 - d01) / (x2 - x0);
  if (std::abs(f.a2) < 1e-8) throw SolverError("fit_delta0_C0: degenerate leading coefficient");
  f.a1 = d01 - f.a2 * (x0 + x1);
  f.a0 = y0 - (f.a2 * x0 + f.a1) * x0;
  f.delta0 = -f.a1 / (2.0 * f.a2);
  f.C0 = (f.a0 - f.a1 * f.a1 / (4.0 * f.a2)) / f.a2;
  return f;
}

/// Smooth cutoff: 1 on |t| <= 1/8, 0 on |t| >= 1/4, built from exp(-1/x).
inline double smooth_cutoff(double t) {
  auto g = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double a = std::abs(t);
  const double x = (0.25 - a) / 0.125;  // 1 at |t| = 1/8, 0 at |t| = 1/4
  const double num = g(x);
  const double den = num + g(1.0 - x);
  return den == 0.0 ? 0.0 : num / den;
}

/// Scale of the cutoff argument: chi(tau B^{-1/4}), chi(tau B^{-1/2}) (the
/// collar variable t), or no cutoff at all (the wall then truncates).
enum class CutoffScale { quarter_power, half_power, none };

inline double cutoff_argument(double tau, double B, CutoffScale scale) {
  switch (scale) {
    case CutoffScale::quarter_power: return tau / std::pow(B, 0.25);
    case CutoffScale::half_power: return tau / std::sqrt(B);
    case CutoffScale::none: break;
  }
  return 0.0;
}

struct TrialState {
  double delta = 0.0;
  double B = 0.0;
  double spacing = 0.0;
  std::vector<double> samples;  // on tau_i = i * spacing over [0, sqrt(B)/2]
  double predicted_eigenvalue = 0.0;
  double norm = 0.0;      // in L^2((0, sqrt(B)/2); (1 - tau/sqrt(B)) dtau)
  double residual = 0.0;  // || (h(delta, B) - predicted) psi || in the same norm
};

namespace detail {

// Four-point Lagrange interpolation of grid samples; zero beyond the grid.
inline double sample_at(const HalfLineGrid& grid, std::span<const double> v, double tau) {
  const double h = grid.spacing();
  const double x = tau / h;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  const auto k = static_cast<std::ptrdiff_t>(std::llround(x));
  if (std::abs(x - static_cast<double>(k)) < 1e-9) return k < n ? v[k] : 0.0;
  if (x >= static_cast<double>(n - 1)) return 0.0;
  std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
  i0 = std::clamp<std::ptrdiff_t>(i0, 0, n - 4);
  double acc = 0.0;
  for (std::ptrdiff_t j = i0; j < i0 + 4; ++j) {
    double l = 1.0;
    for (std::ptrdiff_t m = i0; m < i0 + 4; ++m) {
      if (m != j) l *= (x - static_cast<double>(m)) / static_cast<double>(j - m);
    }
    acc += l * v[j];
  }
  return acc;
}

}  // namespace detail

/// psi = chi_B (u0 + B^{-1/2} u1 + B^{-1} u2) on the collar grid with the
/// model-grid spacing, and its residual under the discrete collar operator.
inline TrialState build_trial_state(double delta, double B, const GroundMode& u0,
                                    CutoffScale scale = CutoffScale::quarter_power) {
  require(B >= 16.0, "build_trial_state: B must be at least 16");
  require(std::abs(delta) <= 10.0, "build_trial_state: |delta| must not exceed 10");
  const ExpansionTerms e = expansion_terms(delta, u0);
  const CollarProblem problem = CollarProblem::disc(delta, B, u0.zeta);
  const std::size_t nodes = collar_nodes(problem, u0.grid.spacing());

  TrialState s;
  s.delta = delta;
  s.B = B;
  s.spacing = problem.depth / static_cast<double>(nodes - 1);
  s.predicted_eigenvalue = u0.mu + e.lambda1 / std::sqrt(B) + e.lambda2 / B;
  s.samples.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double tau = static_cast<double>(i) * s.spacing;
    const double chi = smooth_cutoff(cutoff_argument(tau, B, scale));
    const double v = detail::sample_at(u0.grid, u0.samples, tau) +
                     detail::sample_at(u0.grid, e.correctors.u1, tau) / std::sqrt(B) +
                     detail::sample_at(u0.grid, e.correctors.u2, tau) / B;
    s.samples[i] = chi * v;
  }
  s.samples.back() = 0.0;
  s.norm = collar_norm(problem, nodes, s.samples);
  std::vector<double> r = apply_collar(problem, nodes, s.samples);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= s.predicted_eigenvalue * s.samples[i];
  s.residual = collar_norm(problem, nodes, r);
  return s;
}

}  // namespace hc3
