#pragma once

// One angular (or Fourier) mode of the magnetic Neumann Laplacian in the
// boundary collar of a curve with constant curvature, rescaled to the normal
// variable tau = sqrt(B) t:
//
//   q[u] = int_0^D  w(tau) |u'|^2 + w(tau)^{-1} g(tau)^2 |u|^2  dtau,
//   g = (p - B A1_bar(t)) / sqrt(B),   w = 1 - t k,   t = tau / sqrt(B),
//
// on L^2((0, D); w dtau), Neumann at 0 and Dirichlet at D. For the unit disc
// with p = delta + B/2 + xi0 sqrt(B) this is the form behind e_delta_B.
//
// Finite volumes on nodes tau_i = i h: face weights w(tau_{i+1/2}) in the
// stiffness, lumped mass w(tau_i) h (half cell at 0). The generalized problem
// K v = e M v is symmetrized to a tridiagonal standard problem.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hc3/boundary_gauge.hpp"
#include "hc3/error.hpp"
#include "hc3/tridiagonal.hpp"

namespace hc3 {

struct CollarProblem {
  double B = 0.0;
  double momentum = 0.0;  // p
  double gamma0 = 0.5;    // A1_bar(0); the gauge constant
  double depth = 0.0;     // Dirichlet wall, in tau units
  BoundaryParametrization boundary = BoundaryParametrization::disc();

  /// Paper setting on the unit disc: p = delta + B/2 + xi0 sqrt(B), wall at sqrt(B)/2.
  static CollarProblem disc(double delta, double B, double xi0) {
    require(B > 0.0, "CollarProblem: B must be positive");
    CollarProblem p;
    p.B = B;
    p.momentum = delta + 0.5 * B + xi0 * std::sqrt(B);
    p.depth = 0.5 * std::sqrt(B);
    return p;
  }

  double t_of(double tau) const { return tau / std::sqrt(B); }

  /// g(tau) = (p - B A1_bar) / sqrt(B).
  double momentum_term(double tau) const {
    const double t = t_of(tau);
    return (momentum - B * normal_form_polynomial(gamma0, boundary.curvature(0.0), t)) / std::sqrt(B);
  }

  FormWeights weights(double tau) const {
    const FormWeights w = quadratic_form_weights(boundary, 0.0, t_of(tau));
    if (!(w.measure > 0.0)) throw InvalidArgument("CollarProblem: weight is not positive");
    return w;
  }
};

/// Node count (including the wall node) for a requested spacing.
inline std::size_t collar_nodes(const CollarProblem& p, double spacing) {
  require(p.B > 0.0 && p.depth > 0.0, "collar: invalid problem");
  require(spacing > 0.0, "collar: spacing must be positive");
  require(p.t_of(p.depth) <= p.boundary.t0(), "collar: wall lies outside the boundary collar");
  return static_cast<std::size_t>(std::ceil(p.depth / spacing)) + 1;
}

struct CollarDiscretization {
  SymTridiag stiffness;       // K on unknowns 0..N-1
  std::vector<double> mass;   // lumped M
  std::vector<double> faces;  // normal weight at tau_{i+1/2}, i = 0..N-1
  double spacing = 0.0;
};

inline CollarDiscretization discretize(const CollarProblem& p, std::size_t nodes) {
  require(nodes >= 8, "collar: need at least 8 nodes");
  const std::size_t m = nodes - 1;  // unknowns; last node is the wall
  const double h = p.depth / static_cast<double>(m);
  CollarDiscretization d;
  d.spacing = h;
  d.mass.resize(m);
  d.faces.resize(m);
  d.stiffness.diag.assign(m, 0.0);
  d.stiffness.off.assign(m - 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) d.faces[i] = p.weights((i + 0.5) * h).normal;
  for (std::size_t i = 0; i < m; ++i) {
    const double tau = static_cast<double>(i) * h;
    const FormWeights w = p.weights(tau);
    const double cell = i == 0 ? 0.5 * h : h;
    const double g = p.momentum_term(tau);
    d.mass[i] = w.measure * cell;
    double diag = d.faces[i] / h + w.tangential * g * g * cell;
    if (i > 0) diag += d.faces[i - 1] / h;
    d.stiffness.diag[i] = diag;
    if (i + 1 < m) d.stiffness.off[i] = -d.faces[i] / h;
  }
  return d;
}

/// Lowest eigenvalue on a grid with `nodes` points.
inline double collar_lowest(const CollarProblem& p, std::size_t nodes) {
  const CollarDiscretization d = discretize(p, nodes);
  return lowest_eigenvalue(symmetrize(d.stiffness, d.mass));
}

/// Richardson-extrapolated lowest eigenvalue from spacing h and h/2.
inline double collar_lowest_extrapolated(const CollarProblem& p, double spacing) {
  const std::size_t n = collar_nodes(p, spacing);
  return richardson(collar_lowest(p, n), collar_lowest(p, 2 * n - 1));
}

/// The discrete operator M^{-1} K applied to node samples u_0..u_{N-1}; the
/// wall value is taken as zero.
inline std::vector<double> apply_collar(const CollarProblem& p, std::size_t nodes, std::span<const double> u) {
  const CollarDiscretization d = discretize(p, nodes);
  const std::size_t m = d.mass.size();
  require(u.size() >= m, "apply_collar: too few samples");
  const std::vector<double> ku = d.stiffness.apply(u.first(m));
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = ku[i] / d.mass[i];
  return out;
}

/// Weighted L^2 norm with the lumped collar mass.
inline double collar_norm(const CollarProblem& p, std::size_t nodes, std::span<const double> u) {
  const CollarDiscretization d = discretize(p, nodes);
  double acc = 0.0;
  for (std::size_t i = 0; i < d.mass.size() && i < u.size(); ++i) acc += d.mass[i] * u[i] * u[i];
  return std::sqrt(acc);
}

}  // namespace hc3
