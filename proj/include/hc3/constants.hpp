#pragma once

// Universal spectral data of the de Gennes model: xi0, Theta0, C1, I2 and the
// quadratic lambda2(delta) with its vertex form. Every scalar is computed on
// a grid and on its refinement and Richardson-extrapolated; the ground mode
// kept for downstream use is the one on the base grid.

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "hc3/model_operator.hpp"
#include "hc3/perturbation.hpp"

namespace hc3 {

struct DeGennesConstants {
  double xi0 = 0.0;
  double theta0 = 0.0;
  double C1 = 0.0;
  double I2 = 0.0;
  double delta0 = 0.0;
  double C0 = 0.0;
  Lambda2Fit lambda2;  // a2, a1, a0 (and the same delta0, C0)
  HalfLineGrid grid;
  bool extrapolated = true;
  GroundMode ground_mode;  // base grid, at that grid's own minimizer

  double a2_expected() const { return 3.0 * C1 * std::sqrt(theta0); }
};

namespace detail {

struct GridConstants {
  double xi0, theta0, C1, I2;
  Lambda2Fit fit;
  GroundMode u0;
};

inline GridConstants constants_on(const HalfLineGrid& grid) {
  const XiResult x = find_xi0(grid);
  GroundMode u0 = ground_state(x.xi0, grid);
  std::vector<double> phi(grid.points());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = (grid.node(i) + x.xi0) * u0.samples[i];
  const std::vector<double> w = regularized_resolvent(phi, u0);
  const double I2 = inner(grid, phi, w);
  std::array<std::pair<double, double>, 3> samples;
  for (int k = 0; k < 3; ++k) samples[k] = {k - 1.0, lambda2(k - 1.0, u0)};
  const Lambda2Fit fit = fit_delta0_C0(samples);
  const double C1 = compute_C1(u0);
  return {x.xi0, x.theta0, C1, I2, fit, std::move(u0)};
}

}  // namespace detail

/// `extrapolate` combines `grid` with grid.refined(); otherwise the raw
/// single-grid values are returned.
inline DeGennesConstants compute_constants(const HalfLineGrid& grid = {}, bool extrapolate = true) {
  detail::GridConstants base = detail::constants_on(grid);
  DeGennesConstants c;
  c.grid = grid;
  c.extrapolated = extrapolate;
  if (extrapolate) {
    const detail::GridConstants fine = detail::constants_on(grid.refined());
    c.xi0 = richardson(base.xi0, fine.xi0);
    c.theta0 = richardson(base.theta0, fine.theta0);
    c.C1 = richardson(base.C1, fine.C1);
    c.I2 = richardson(base.I2, fine.I2);
    Lambda2Fit f;
    f.a2 = richardson(base.fit.a2, fine.fit.a2);
    f.a1 = richardson(base.fit.a1, fine.fit.a1);
    f.a0 = richardson(base.fit.a0, fine.fit.a0);
    const std::array<std::pair<double, double>, 3> pts{{{-1.0, f(-1.0)}, {0.0, f(0.0)}, {1.0, f(1.0)}}};
    c.lambda2 = fit_delta0_C0(pts);
  } else {
    c.xi0 = base.xi0;
    c.theta0 = base.theta0;
    c.C1 = base.C1;
    c.I2 = base.I2;
    c.lambda2 = base.fit;
  }
  c.delta0 = c.lambda2.delta0;
  c.C0 = c.lambda2.C0;
  c.ground_mode = std::move(base.u0);

  if (!(c.theta0 > 0.5 && c.theta0 < 1.0) || !(c.xi0 < 0.0) || !(c.C1 > 0.0)) {
    throw SolverError("compute_constants: constants outside their admissible ranges");
  }
  return c;
}

/// Constants at the default grid, computed once.
inline const DeGennesConstants& default_constants() {
  static const DeGennesConstants c = compute_constants();
  return c;
}

}  // namespace hc3
