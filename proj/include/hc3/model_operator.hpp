#pragma once

// The half-line de Gennes operator h(zeta) = -d^2/dtau^2 + (tau + zeta)^2
// with Neumann condition at tau = 0, discretized by second-order central
// differences on [0, L] with a Dirichlet wall at tau = L.
//
// Discrete functions are stored as samples on all grid nodes; the last node
// carries the wall and is always zero. Inner products are composite
// trapezoid sums. With trapezoid weights W the nonsymmetric ghost-node
// matrix A becomes the symmetric S = W^{1/2} A W^{-1/2}, which is what the
// tridiagonal eigensolver sees.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hc3/error.hpp"
#include "hc3/optimize.hpp"
#include "hc3/tridiagonal.hpp"

namespace hc3 {

class HalfLineGrid {
 public:
  HalfLineGrid() : HalfLineGrid(20.0, 4001) {}
  HalfLineGrid(double length, std::size_t points) : length_(length), points_(points) {
    require(length > 0.0, "HalfLineGrid: length must be positive");
    require(points >= 16, "HalfLineGrid: need at least 16 points");
  }

  double length() const { return length_; }
  std::size_t points() const { return points_; }
  double spacing() const { return length_ / static_cast<double>(points_ - 1); }
  double node(std::size_t i) const { return static_cast<double>(i) * spacing(); }

  std::vector<double> nodes() const {
    std::vector<double> t(points_);
    for (std::size_t i = 0; i < points_; ++i) t[i] = node(i);
    return t;
  }

  /// Trapezoid quadrature weights.
  std::vector<double> weights() const {
    std::vector<double> w(points_, spacing());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
  }

  /// Same interval, half the spacing.
  HalfLineGrid refined() const { return {length_, 2 * points_ - 1}; }

  friend bool operator==(const HalfLineGrid&, const HalfLineGrid&) = default;

 private:
  double length_;
  std::size_t points_;
};

inline double inner(const HalfLineGrid& grid, std::span<const double> a, std::span<const double> b) {
  require(a.size() == grid.points() && b.size() == grid.points(), "inner: size mismatch");
  const double h = grid.spacing();
  double acc = 0.5 * (a.front() * b.front() + a.back() * b.back());
  for (std::size_t i = 1; i + 1 < a.size(); ++i) acc += a[i] * b[i];
  return acc * h;
}

inline double norm(const HalfLineGrid& grid, std::span<const double> a) { return std::sqrt(inner(grid, a, a)); }

struct GroundMode {
  HalfLineGrid grid;
  double zeta = 0.0;
  double mu = 0.0;
  std::vector<double> samples;
  double boundary_value() const { return samples.front(); }
};

namespace detail {

inline void check_wall(double zeta, const HalfLineGrid& grid) {
  const double reach = grid.length() + zeta;
  if (!(reach > 0.0 && reach * reach >= 4.0 * std::max(1.0, zeta * zeta))) {
    throw InvalidArgument("grid too small: potential at the wall is below 4*max(1, zeta^2)");
  }
}

// Symmetric form of h(zeta) on the interior unknowns 0..n-2.
inline SymTridiag de_gennes_matrix(double zeta, const HalfLineGrid& grid) {
  const std::size_t m = grid.points() - 1;
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  SymTridiag s;
  s.diag.resize(m);
  s.off.assign(m - 1, -inv_h2);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = grid.node(i) + zeta;
    s.diag[i] = 2.0 * inv_h2 + x * x;
  }
  s.off[0] = -std::sqrt(2.0) * inv_h2;
  return s;
}

inline std::vector<double> sqrt_weights(const HalfLineGrid& grid) {
  std::vector<double> w = grid.weights();
  for (double& x : w) x = std::sqrt(x);
  return w;
}

// Physical samples -> symmetric coordinates (drops the wall node).
inline std::vector<double> to_symmetric(const HalfLineGrid& grid, std::span<const double> u) {
  const auto sw = sqrt_weights(grid);
  std::vector<double> v(grid.points() - 1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = sw[i] * u[i];
  return v;
}

inline std::vector<double> from_symmetric(const HalfLineGrid& grid, std::span<const double> v) {
  const auto sw = sqrt_weights(grid);
  std::vector<double> u(grid.points(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / sw[i];
  return u;
}

}  // namespace detail

/// Lowest eigenvalue of the discretized h(zeta).
inline double mu(double zeta, const HalfLineGrid& grid) {
  detail::check_wall(zeta, grid);
  return lowest_eigenvalue(detail::de_gennes_matrix(zeta, grid));
}

/// Feynman-Hellmann derivative of the discrete mu: 2 <(tau + zeta) u, u>.
inline double mu_derivative(const GroundMode& mode) {
  std::vector<double> f(mode.samples.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 2.0 * (mode.grid.node(i) + mode.zeta) * mode.samples[i];
  return inner(mode.grid, f, mode.samples);
}

/// Applies the discrete h(zeta) (ghost-node Neumann row at 0) to physical
/// samples. The wall entry of the result is zero.
inline std::vector<double> apply_h0(double zeta, const HalfLineGrid& grid, std::span<const double> u) {
  const std::size_t n = grid.points();
  require(u.size() == n, "apply_h0: size mismatch");
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double left = i == 0 ? u[1] : u[i - 1];
    const double x = grid.node(i) + zeta;
    out[i] = (2.0 * u[i] - left - u[i + 1]) * inv_h2 + x * x * u[i];
  }
  return out;
}

/// Normalized, positive ground state of the discretized h(zeta).
inline GroundMode ground_state(double zeta, const HalfLineGrid& grid) {
  detail::check_wall(zeta, grid);
  const SymTridiag s = detail::de_gennes_matrix(zeta, grid);
  EigenPair pair = lowest_eigenpair(s);
  GroundMode mode{grid, zeta, pair.value, detail::from_symmetric(grid, pair.vector)};
  const double nrm = norm(grid, mode.samples);
  for (double& x : mode.samples) x /= nrm;
  return mode;
}

struct XiResult {
  double xi0 = 0.0;
  double theta0 = 0.0;
};

/// Minimizer of mu over zeta in [-2, 0]: golden-section search to a coarse
/// bracket, then the zero of the Feynman-Hellmann derivative. mu is flat at
/// the minimum, so comparing eigenvalues alone cannot resolve zeta below
/// sqrt(eigenvalue noise); the derivative can. `tol` bounds |mu'(xi0)|,
/// and mu'' is of order one there, so it is also the zeta accuracy.
inline XiResult find_xi0(const HalfLineGrid& grid, double tol = 1e-12) {
  require(tol > 0.0, "find_xi0: tol must be positive");
  auto f = [&](double z) { return mu(z, grid); };
  const double left = f(-2.0), mid = f(-1.0), right = f(0.0);
  if (!(left > mid && right > mid)) throw SolverError("find_xi0: minimum is not interior to [-2, 0]");
  const Minimum coarse = golden_section_minimize(f, -2.0, 0.0, 1e-4);
  auto slope = [&](double z) { return mu_derivative(ground_state(z, grid)); };
  double lo = coarse.x - 1e-3, hi = coarse.x + 1e-3;
  for (int widen = 0; widen < 8 && (slope(lo) > 0.0 || slope(hi) < 0.0); ++widen) {
    lo -= 1e-2;
    hi += 1e-2;
  }
  const double xi0 = bracketed_root(slope, lo, hi, tol);
  return {xi0, f(xi0)};
}

/// C1 = u0(0)^2 / 3, computed from a renormalized copy so that any scaling
/// of the samples is irrelevant.
inline double compute_C1(const GroundMode& u0) {
  const double nrm = norm(u0.grid, u0.samples);
  require(nrm > 0.0, "compute_C1: zero mode");
  const double b = u0.boundary_value() / nrm;
  return b * b / 3.0;
}

/// Regularized resolvent R0 of (h(xi0) - Theta0): returns w with
/// (h0 - Theta0) w = phi - <phi, u0> u0 and <w, u0> = 0.
///
/// The bordered system [S - Theta0, v0; v0^T, 0] is solved by eliminating
/// node 0. The trailing block S[1:,1:] - Theta0 is positive definite by
/// strict interlacing, and v0(0) = u0(0) sqrt(h/2) is bounded away from 0,
/// so the remaining 2x2 system is well conditioned.
inline std::vector<double> regularized_resolvent(std::span<const double> phi, const GroundMode& u0) {
  const HalfLineGrid& grid = u0.grid;
  require(phi.size() == grid.points(), "regularized_resolvent: size mismatch");
  const double proj = inner(grid, phi, u0.samples);
  std::vector<double> rhs(phi.begin(), phi.end());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= proj * u0.samples[i];
  rhs.back() = 0.0;

  const SymTridiag s = detail::de_gennes_matrix(u0.zeta, grid);
  const std::vector<double> r = detail::to_symmetric(grid, rhs);
  const std::vector<double> v = detail::to_symmetric(grid, u0.samples);
  const std::size_t m = s.size();

  SymTridiag tail;
  tail.diag.assign(s.diag.begin() + 1, s.diag.end());
  tail.off.assign(s.off.begin() + 1, s.off.end());
  for (double& d : tail.diag) d -= u0.mu;
  const double coupling = s.off[0];

  std::vector<double> e1(m - 1, 0.0);
  e1[0] = coupling;
  const std::span<const double> r_tail(r.data() + 1, m - 1);
  const std::span<const double> v_tail(v.data() + 1, m - 1);
  std::vector<double> a, b, e;
  try {
    a = solve_spd(tail, r_tail);
    b = solve_spd(tail, e1);
    e = solve_spd(tail, v_tail);
  } catch (const SolverError&) {
    throw SolverError("regularized_resolvent: trailing block is not positive definite");
  }
  const auto dot = [](std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
  };
  const double s11 = (s.diag[0] - u0.mu) - coupling * b[0];
  const double s12 = v[0] - coupling * e[0];
  const double s21 = v[0] - dot(v_tail, b);
  const double s22 = -dot(v_tail, e);
  const double g1 = r[0] - coupling * a[0];
  const double g2 = -dot(v_tail, a);
  const double det = s11 * s22 - s12 * s21;
  if (det == 0.0 || !std::isfinite(det)) throw SolverError("regularized_resolvent: singular bordered system");
  const double y0 = (g1 * s22 - s12 * g2) / det;
  const double c = (s11 * g2 - s21 * g1) / det;

  std::vector<double> y(m);
  y[0] = y0;
  for (std::size_t i = 1; i < m; ++i) y[i] = a[i - 1] - b[i - 1] * y0 - e[i - 1] * c;
  return detail::from_symmetric(grid, y);
}

}  // namespace hc3
