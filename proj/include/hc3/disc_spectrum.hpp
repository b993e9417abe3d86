#pragma once

// Lowest eigenvalue of the magnetic Neumann Laplacian with constant field B
// on the unit disc. In the gauge F = (-x2, x1)/2 each angular mode m gives
//
//   -(1/r)(r u')' + (m/r - B r/2)^2   on L^2((0, 1), r dr), Neumann at r = 1,
//
// discretized with cell-centered finite volumes (zero flux through r = 0).
// The grid is set in the boundary-layer variable tau = sqrt(B)(1 - r): the
// spacing in tau is fixed, so cost does not grow with B. For large B only an
// annulus of depth `collar_depth` (in tau) is kept, with a Dirichlet inner
// wall; the eigenfunction there is below 1e-25. Eigenvalues and Feynman-
// Hellmann slopes are Richardson-extrapolated over spacing h and h/2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "hc3/collar_problem.hpp"
#include "hc3/constants.hpp"
#include "hc3/error.hpp"
#include "hc3/tridiagonal.hpp"

namespace hc3 {

struct RadialGrid {
  double tau_spacing = 0.01;
  double collar_depth = 12.0;  // annulus depth in tau when it fits inside the disc
  bool extrapolate = true;

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;
};

/// Coefficients of c_k * (-(1/r)(r u')') + (c_m m / r - c_B r / 2)^2. The
/// usual form is {1, 1, B}; the semiclassical form at h = 1/B is {h^2, h, 1}.
struct RadialForm {
  double kinetic = 1.0;
  double angular = 1.0;
  double field = 0.0;

  static RadialForm field_form(double B) { return {1.0, 1.0, B}; }
  static RadialForm semiclassical(double h) { return {h * h, h, 1.0}; }
};

struct RadialMode {
  int m = 0;
  double B = 0.0;
  double eigenvalue = 0.0;
  double slope = 0.0;            // d eigenvalue / dB at fixed m (Feynman-Hellmann)
  double inner_radius = 0.0;     // 0 for the full disc
  std::vector<double> radii;     // cell centers, base grid
  std::vector<double> samples;   // eigenfunction, max |value| = 1
};

namespace detail {

struct RadialSystem {
  SymTridiag symmetric;
  std::vector<double> radii;
  std::vector<double> sqrt_mass;
  std::vector<double> potential_slope;  // dV/dB at fixed m (field form only)
};

inline RadialSystem radial_system(int m, const RadialForm& form, double inner, std::size_t cells) {
  const double h = (1.0 - inner) / static_cast<double>(cells);
  RadialSystem s;
  SymTridiag k;
  k.diag.assign(cells, 0.0);
  k.off.assign(cells - 1, 0.0);
  std::vector<double> mass(cells);
  s.radii.resize(cells);
  s.potential_slope.resize(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    const double r = inner + (static_cast<double>(j) + 0.5) * h;
    const double a = form.angular * m / r - 0.5 * form.field * r;
    s.radii[j] = r;
    s.potential_slope[j] = -a * r;
    mass[j] = r * h;
    k.diag[j] += a * a * r * h;
    if (j + 1 < cells) {
      const double face = inner + static_cast<double>(j + 1) * h;
      const double c = form.kinetic * face / h;
      k.diag[j] += c;
      k.diag[j + 1] += c;
      k.off[j] = -c;
    }
  }
  // Dirichlet inner wall through an odd ghost cell.
  if (inner > 0.0) k.diag[0] += 2.0 * form.kinetic * inner / h;
  s.sqrt_mass.resize(cells);
  for (std::size_t j = 0; j < cells; ++j) s.sqrt_mass[j] = std::sqrt(mass[j]);
  s.symmetric = symmetrize(k, mass);
  return s;
}

struct RadialSolve {
  double value;
  double slope;
  std::vector<double> radii;
  std::vector<double> samples;
};

inline RadialSolve radial_solve(int m, const RadialForm& form, double inner, std::size_t cells,
                                bool want_vector) {
  const RadialSystem s = radial_system(m, form, inner, cells);
  RadialSolve out{lowest_eigenvalue(s.symmetric), 0.0, {}, {}};
  const std::vector<double> v = inverse_iteration(s.symmetric, out.value, 2);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    num += v[j] * v[j] * s.potential_slope[j];
    den += v[j] * v[j];
  }
  out.slope = num / den;
  if (want_vector) {
    out.radii = s.radii;
    out.samples.resize(v.size());
    double peak = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      out.samples[j] = v[j] / s.sqrt_mass[j];
      peak = std::max(peak, std::abs(out.samples[j]));
    }
    for (double& x : out.samples) x /= peak;
  }
  return out;
}

}  // namespace detail

/// Lowest eigenvalue of angular mode m. `full_disc` forces the whole disc
/// even when the annulus would do.
inline RadialMode radial_lowest(int m, double B, const RadialGrid& grid = {}, bool full_disc = false,
                                std::optional<RadialForm> form_override = std::nullopt) {
  require(B >= 0.0 && std::isfinite(B), "radial_lowest: B must be nonnegative");
  require(grid.tau_spacing > 0.0 && grid.collar_depth > 0.0, "radial_lowest: invalid grid");
  if (1.0 / grid.tau_spacing < 10.0) {
    throw InvalidArgument("radial_lowest: boundary layer under-resolved (fewer than 10 nodes)");
  }
  const double scale = std::max(std::sqrt(B), 1.0);
  const double depth_r = grid.collar_depth / scale;
  const double inner = (!full_disc && depth_r < 1.0) ? 1.0 - depth_r : 0.0;
  const double width_tau = (1.0 - inner) * scale;
  const auto cells = static_cast<std::size_t>(std::ceil(width_tau / grid.tau_spacing));
  require(cells >= 16, "radial_lowest: too few cells");
  const RadialForm form = form_override.value_or(RadialForm::field_form(B));

  detail::RadialSolve coarse = detail::radial_solve(m, form, inner, cells, true);
  RadialMode mode;
  mode.m = m;
  mode.B = B;
  mode.inner_radius = inner;
  mode.eigenvalue = coarse.value;
  mode.slope = coarse.slope;
  if (grid.extrapolate) {
    const detail::RadialSolve fine = detail::radial_solve(m, form, inner, 2 * cells, false);
    mode.eigenvalue = richardson(coarse.value, fine.value);
    mode.slope = richardson(coarse.slope, fine.slope);
  }
  mode.radii = std::move(coarse.radii);
  mode.samples = std::move(coarse.samples);
  return mode;
}

/// delta(m, B) = m - B/2 - xi0 sqrt(B).
inline double angular_detuning(int m, double B, double xi0) { return m - 0.5 * B - xi0 * std::sqrt(B); }

struct ModeValue {
  int m = 0;
  double eigenvalue = 0.0;
  double slope = 0.0;
  bool refined = false;  // full-accuracy solve; otherwise from the coarse scan
};

struct DiscEigenvalue {
  double B = 0.0;
  int m_star = 0;
  double lambda1 = 0.0;
  double delta_m = 0.0;  // delta(m*, B)
  double Delta_B = 0.0;  // min over scanned m of |delta(m, B) - delta0|
  double slope = 0.0;    // branch slope of m* at B
  std::vector<ModeValue> modes;
};

/// Center of the angular-momentum scan window.
inline int scan_center(double B, const DeGennesConstants& c) {
  return static_cast<int>(std::lround(0.5 * B + c.xi0 * std::sqrt(B) + c.delta0));
}

/// lambda1(B) = min over m of the radial eigenvalues, scanning
/// scan_center(B) +- window and widening when the minimum sits on an edge.
/// The window is scanned on a grid four times coarser without
/// extrapolation; the lowest modes are then re-solved at full accuracy.
/// Neighbouring branches differ by O(1) while the coarse errors of adjacent
/// modes differ by far less, so the refined set always contains the minimizer.
inline DiscEigenvalue lambda1_disc(double B, const DeGennesConstants& c = default_constants(),
                                   const RadialGrid& grid = {}, int window = 8) {
  require(B > 0.0 && std::isfinite(B), "lambda1_disc: B must be positive");
  require(window >= 1, "lambda1_disc: window must be positive");
  RadialGrid coarse_grid = grid;
  coarse_grid.tau_spacing = 4.0 * grid.tau_spacing;
  coarse_grid.extrapolate = false;
  auto coarse = [&](int m) {
    const RadialMode r = radial_lowest(m, B, coarse_grid);
    return ModeValue{m, r.eigenvalue, r.slope, false};
  };
  const auto by_value = [](const ModeValue& a, const ModeValue& b) { return a.eigenvalue < b.eigenvalue; };

  const int center = scan_center(B, c);
  int lo = center - window, hi = center + window;
  std::vector<ModeValue> modes;
  for (int m = lo; m <= hi; ++m) modes.push_back(coarse(m));
  for (int widen = 0;; ++widen) {
    const int m_best = std::min_element(modes.begin(), modes.end(), by_value)->m;
    if (m_best != lo && m_best != hi) break;
    if (widen == 3) throw SolverError("lambda1_disc: minimum stays on the scan window edge");
    std::vector<ModeValue> grown;
    for (int m = lo - window; m < lo; ++m) grown.push_back(coarse(m));
    grown.insert(grown.end(), modes.begin(), modes.end());
    for (int m = hi + 1; m <= hi + window; ++m) grown.push_back(coarse(m));
    lo -= window;
    hi += window;
    modes = std::move(grown);
  }

  std::vector<ModeValue> order = modes;
  std::sort(order.begin(), order.end(), by_value);
  const double margin = 1e-3 * std::max(1.0, std::abs(order.front().eigenvalue));
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k >= 3 && order[k].eigenvalue > order.front().eigenvalue + margin) break;
    const RadialMode r = radial_lowest(order[k].m, B, grid);
    ModeValue& slot = modes[static_cast<std::size_t>(order[k].m - lo)];
    slot = {r.m, r.eigenvalue, r.slope, true};
  }

  DiscEigenvalue d;
  d.B = B;
  const ModeValue* best = nullptr;
  for (const ModeValue& mv : modes) {
    if (mv.refined && (!best || mv.eigenvalue < best->eigenvalue)) best = &mv;
  }
  d.m_star = best->m;
  d.lambda1 = best->eigenvalue;
  d.slope = best->slope;
  d.delta_m = angular_detuning(d.m_star, B, c.xi0);
  d.Delta_B = std::numeric_limits<double>::infinity();
  for (const ModeValue& mv : modes) d.Delta_B = std::min(d.Delta_B, std::abs(angular_detuning(mv.m, B, c.xi0) - c.delta0));
  d.modes = std::move(modes);
  return d;
}

/// Two-term-plus-oscillation prediction Theta0 B - C1 sqrt(B) + a2 (Delta_B^2 + C0).
inline double disc_expansion(double B, double Delta_B, const DeGennesConstants& c, bool with_oscillation = true) {
  const double osc = with_oscillation ? Delta_B * Delta_B : 0.0;
  return c.theta0 * B - c.C1 * std::sqrt(B) + c.lambda2.a2 * (osc + c.C0);
}

inline double expansion_residual(const DiscEigenvalue& d, const DeGennesConstants& c, bool with_oscillation = true) {
  return d.lambda1 - disc_expansion(d.B, d.Delta_B, c, with_oscillation);
}

struct WeightedBoundaryProblem {
  double delta = 0.0;
  double B = 0.0;
  double e = 0.0;
};

/// e_{delta,B}: lowest eigenvalue of the weighted collar operator.
inline WeightedBoundaryProblem e_delta_B(double delta, double B, const DeGennesConstants& c = default_constants(),
                                         double tau_spacing = 0.01) {
  require(B >= 25.0, "e_delta_B: B must be at least 25");
  require(std::abs(delta) <= 10.0, "e_delta_B: |delta| must not exceed 10");
  const CollarProblem p = CollarProblem::disc(delta, B, c.xi0);
  return {delta, B, collar_lowest_extrapolated(p, tau_spacing)};
}

/// B * min over m of e_{delta(m,B),B}, scanning the same window as lambda1_disc.
inline double boundary_lambda1(double B, const DeGennesConstants& c = default_constants(), int window = 8,
                               double tau_spacing = 0.01) {
  const int center = scan_center(B, c);
  double best = std::numeric_limits<double>::infinity();
  for (int m = center - window; m <= center + window; ++m) {
    const double delta = angular_detuning(m, B, c.xi0);
    if (std::abs(delta) > 10.0) continue;
    best = std::min(best, e_delta_B(delta, B, c, tau_spacing).e);
  }
  return B * best;
}

struct OneSidedDerivative {
  double B = 0.0;
  double right = 0.0;               // right derivative of lambda1
  double difference_quotient = 0.0; // (lambda1(B + h) - lambda1(B)) / h
  double step = 0.0;
  int m_at_B = 0;
  int m_right = 0;                  // branch that is minimal just to the right of B
  bool mode_switch = false;         // minimizing mode changes inside the step
  double slope_at_B = 0.0;          // branch slope of m_at_B
  double slope_after = 0.0;         // branch slope of the minimizer at B + h
};

/// Right derivative via Feynman-Hellmann on the active branches: among the
/// modes attaining the minimum at B (to `tie` relative), the smallest slope.
inline OneSidedDerivative right_derivative(double B, double step = -1.0, const DeGennesConstants& c = default_constants(),
                                           const RadialGrid& grid = {}) {
  if (step <= 0.0) step = 1e-3 * std::sqrt(B);
  const DiscEigenvalue at = lambda1_disc(B, c, grid);
  const DiscEigenvalue after = lambda1_disc(B + step, c, grid);
  constexpr double tie = 1e-10;
  OneSidedDerivative r;
  r.B = B;
  r.step = step;
  r.m_at_B = at.m_star;
  r.slope_at_B = at.slope;
  r.slope_after = after.slope;
  r.difference_quotient = (after.lambda1 - at.lambda1) / step;
  r.mode_switch = after.m_star != at.m_star;
  r.right = std::numeric_limits<double>::infinity();
  for (const ModeValue& mv : at.modes) {
    if (mv.refined && mv.eigenvalue <= at.lambda1 + tie * std::abs(at.lambda1) && mv.slope < r.right) {
      r.right = mv.slope;
      r.m_right = mv.m;
    }
  }
  return r;
}

/// Smallest sampled B beyond which the sampled lambda1 is strictly increasing.
inline std::optional<double> monotone_onset(const std::vector<double>& B, const std::vector<double>& lambda1) {
  require(B.size() == lambda1.size() && !B.empty(), "monotone_onset: size mismatch");
  std::size_t start = B.size() - 1;
  while (start > 0 && lambda1[start - 1] < lambda1[start]) --start;
  if (start + 1 == B.size() && B.size() > 1) return std::nullopt;
  return B[start];
}

struct DecayProfile {
  double B = 0.0;
  double normal_slope = 0.0;   // d log|f| / d(sqrt(B)(1 - r))
  double interior_mass = 0.0;  // mass fraction on r < 1/2
  std::size_t fit_points = 0;
};

/// Fits log|f| against sqrt(B)(1 - r) where |f| / max|f| lies in [1e-8, 1e-2],
/// for the minimizing mode on the full disc.
inline DecayProfile decay_profile(double B, const DeGennesConstants& c = default_constants(),
                                  const RadialGrid& grid = {}) {
  require(B >= 100.0, "decay_profile: B must be at least 100");
  const DiscEigenvalue d = lambda1_disc(B, c, grid);
  RadialGrid base = grid;
  base.extrapolate = false;
  const RadialMode mode = radial_lowest(d.m_star, B, base, true);
  DecayProfile p;
  p.B = B;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double inner_mass = 0.0, total_mass = 0.0;
  for (std::size_t j = 0; j < mode.radii.size(); ++j) {
    const double r = mode.radii[j];
    const double f = std::abs(mode.samples[j]);
    total_mass += f * f * r;
    if (r < 0.5) inner_mass += f * f * r;
    if (f >= 1e-8 && f <= 1e-2) {
      const double x = std::sqrt(B) * (1.0 - r);
      const double y = std::log(f);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++p.fit_points;
    }
  }
  if (p.fit_points < 10) throw SolverError("decay_profile: insufficient dynamic range");
  const double n = static_cast<double>(p.fit_points);
  p.normal_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  p.interior_mass = inner_mass / total_mass;
  return p;
}

}  // namespace hc3
