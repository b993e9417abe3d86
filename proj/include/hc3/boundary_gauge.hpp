#pragma once

// Boundary (s, t) coordinates near a smooth closed curve: arc length s and
// inward normal distance t. Provides the weights of the magnetic quadratic
// form in these coordinates and the gauge normal form
//   A1_bar(s, t) = gamma0 - t + t^2 k(s) / 2 + t^2 b(s, t),   A2_bar = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "hc3/error.hpp"
#include "hc3/tridiagonal.hpp"

namespace hc3 {

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

template <typename F>
double integrate(F&& f, double a, double b, int order = 24) {
  static const auto rule = gauss_legendre(24);
  const auto& [x, w] = order == 24 ? rule : gauss_legendre(order);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(mid + half * x[i]);
  return acc * half;
}

}  // namespace detail

/// Arc-length parametrized boundary with curvature k(s) and a collar of
/// width t0 on which (s, t) -> gamma(s) + t nu(s) is a diffeomorphism.
class BoundaryParametrization {
 public:
  using Curvature = std::function<double(double)>;

  BoundaryParametrization(double perimeter, Curvature curvature, double t0,
                          std::optional<double> area = std::nullopt)
      : perimeter_(perimeter), curvature_(std::move(curvature)), t0_(t0) {
    require(perimeter > 0.0, "BoundaryParametrization: perimeter must be positive");
    require(t0 > 0.0, "BoundaryParametrization: collar width must be positive");
    require(static_cast<bool>(curvature_), "BoundaryParametrization: missing curvature");
    k_max_ = -std::numeric_limits<double>::infinity();
    constexpr int probes = 4096;
    for (int i = 0; i < probes; ++i) k_max_ = std::max(k_max_, curvature_(perimeter * i / probes));
    if (!(1.0 - t0 * k_max_ > 0.0)) {
      throw InvalidArgument("BoundaryParametrization: collar too wide, 1 - t0 * max k <= 0");
    }
    area_ = area ? *area : enclosed_area();
  }

  /// Unit-speed circle of radius R; curvature 1/R.
  static BoundaryParametrization disc(double radius = 1.0, double t0 = 0.5) {
    require(radius > 0.0, "disc: radius must be positive");
    const double k = 1.0 / radius;
    return {2.0 * std::numbers::pi * radius, [k](double) { return k; }, t0,
            std::numbers::pi * radius * radius};
  }

  /// Curvature given by uniform samples over one period, evaluated by
  /// trigonometric interpolation.
  static BoundaryParametrization from_samples(double perimeter, std::vector<double> samples, double t0) {
    const std::size_t m = samples.size();
    require(m >= 3, "from_samples: need at least three curvature samples");
    std::vector<std::complex<double>> coef(m);
    for (std::size_t j = 0; j < m; ++j) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        acc += samples[i] * std::polar(1.0, -2.0 * std::numbers::pi * double(i * j % m) / double(m));
      }
      coef[j] = acc / double(m);
    }
    auto k = [coef, perimeter](double s) {
      const std::size_t m = coef.size();
      const double x = 2.0 * std::numbers::pi * s / perimeter;
      double value = coef[0].real();
      for (std::size_t j = 1; 2 * j < m; ++j) value += 2.0 * (coef[j] * std::polar(1.0, j * x)).real();
      if (m % 2 == 0) value += (coef[m / 2] * std::polar(1.0, (m / 2) * x)).real();
      return value;
    };
    return {perimeter, k, t0};
  }

  double perimeter() const { return perimeter_; }
  double t0() const { return t0_; }
  double max_curvature() const { return k_max_; }
  double area() const { return area_; }

  double curvature(double s) const {
    double r = std::fmod(s, perimeter_);
    if (r < 0.0) r += perimeter_;
    return curvature_(r);
  }

 private:
  // Integrates the tangent angle and applies the shoelace formula to the
  // resulting polygon. The polygon area is second order in the step, so two
  // resolutions are combined by Richardson extrapolation.
  double enclosed_area() const { return richardson(polygon_area(4096), polygon_area(8192)); }

  double polygon_area(int n) const {
    const double ds = perimeter_ / n;
    double angle = 0.0, x = 0.0, y = 0.0, twice_area = 0.0;
    double k_prev = curvature_(0.0);
    for (int i = 0; i < n; ++i) {
      const double k_next = curvature_((i + 1) * ds);
      const double mid_angle = angle + 0.25 * ds * (k_prev + k_next);
      const double nx = x + ds * std::cos(mid_angle);
      const double ny = y + ds * std::sin(mid_angle);
      twice_area += x * ny - nx * y;
      x = nx;
      y = ny;
      angle += 0.5 * ds * (k_prev + k_next);
      k_prev = k_next;
    }
    return 0.5 * std::abs(twice_area);
  }

  double perimeter_;
  Curvature curvature_;
  double t0_;
  double k_max_ = 0.0;
  double area_ = 0.0;
};

/// Weights of the quadratic form in boundary coordinates at (s, t):
/// |(D_s - A1) u|^2 carries (1 - t k)^{-1}, |D_t u|^2 carries (1 - t k),
/// and the L^2 measure is (1 - t k) ds dt.
struct FormWeights {
  double tangential = 1.0;
  double normal = 1.0;
  double measure = 1.0;
};

inline FormWeights quadratic_form_weights(const BoundaryParametrization& boundary, double s, double t) {
  if (!(t >= 0.0 && t <= boundary.t0())) throw InvalidArgument("quadratic_form_weights: t outside the collar");
  const double j = 1.0 - t * boundary.curvature(s);
  return {1.0 / j, j, j};
}

/// Magnetic field strength (curl A) in boundary coordinates.
struct CollarField {
  std::function<double(double, double)> curl;
  bool unit = false;

  static CollarField unit_field() { return {[](double, double) { return 1.0; }, true}; }
};

/// gamma0 for a constant field: field * area / perimeter.
inline double gamma0(const BoundaryParametrization& boundary, double constant_field) {
  return constant_field * boundary.area() / boundary.perimeter();
}

/// gamma0 on a disc of radius R for a field given in polar coordinates
/// (r, theta): Gauss-Legendre in r, trapezoid in theta.
inline double gamma0_disc(const std::function<double(double, double)>& curl_polar, double radius = 1.0) {
  constexpr int angles = 128;
  double total = 0.0;
  for (int j = 0; j < angles; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / angles;
    total += detail::integrate([&](double r) { return curl_polar(r, theta) * r; }, 0.0, radius);
  }
  total *= 2.0 * std::numbers::pi / angles;
  return total / (2.0 * std::numbers::pi * radius);
}

/// The b = 0 part of the normal form: gamma0 - t + t^2 k / 2.
inline double normal_form_polynomial(double gamma0_value, double k, double t) {
  return gamma0_value - t + 0.5 * t * t * k;
}

/// A1_bar(s, t). For the unit field it is the exact polynomial; otherwise
/// d/dt A1_bar = -(1 - t k(s)) curl(s, t) is integrated from A1_bar(s, 0) = gamma0.
inline double normal_form_A1(const BoundaryParametrization& boundary, const CollarField& field, double gamma0_value,
                             double s, double t) {
  if (!(t >= 0.0 && t <= 0.5 * boundary.t0())) throw InvalidArgument("normal_form_A1: t outside the half collar");
  const double k = boundary.curvature(s);
  if (field.unit) return normal_form_polynomial(gamma0_value, k, t);
  if (t == 0.0) return gamma0_value;
  return gamma0_value - detail::integrate([&](double x) { return (1.0 - x * k) * field.curl(s, x); }, 0.0, t);
}

/// Remainder b(s, t) = (A1_bar - gamma0 + t - t^2 k / 2) / t^2. Near t = 0 the
/// quotient is cancellation-bound, so the limit is taken from a quadratic
/// through three nearby values.
inline double normal_form_remainder(const BoundaryParametrization& boundary, const CollarField& field,
                                    double gamma0_value, double s, double t) {
  if (field.unit) return 0.0;
  const double k = boundary.curvature(s);
  auto quotient = [&](double x) {
    return (normal_form_A1(boundary, field, gamma0_value, s, x) - normal_form_polynomial(gamma0_value, k, x)) / (x * x);
  };
  const double t_small = 1e-3 * boundary.t0();
  if (t >= t_small) return quotient(t);
  const double h = t_small;
  const double f1 = quotient(h), f2 = quotient(2.0 * h), f3 = quotient(3.0 * h);
  // Lagrange quadratic through (h, f1), (2h, f2), (3h, f3) evaluated at t.
  const double a = (t - 2.0 * h) * (t - 3.0 * h) / (2.0 * h * h);
  const double b = -(t - h) * (t - 3.0 * h) / (h * h);
  const double c = (t - h) * (t - 2.0 * h) / (2.0 * h * h);
  return a * f1 + b * f2 + c * f3;
}

struct GaugeNormalForm {
  double gamma0 = 0.0;
  std::function<double(double, double)> A1_bar;
  double b_bound = 0.0;
};

/// Normal form on the half collar with sup |b| sampled on an (s, t) grid.
inline GaugeNormalForm gauge_normal_form(const BoundaryParametrization& boundary, CollarField field,
                                         double gamma0_value, int s_samples = 64, int t_samples = 64) {
  GaugeNormalForm form;
  form.gamma0 = gamma0_value;
  form.A1_bar = [boundary, field, gamma0_value](double s, double t) {
    return normal_form_A1(boundary, field, gamma0_value, s, t);
  };
  if (!field.unit) {
    const double t_max = 0.5 * boundary.t0();
    for (int i = 0; i < s_samples; ++i) {
      const double s = boundary.perimeter() * i / s_samples;
      for (int j = 0; j <= t_samples; ++j) {
        const double t = t_max * j / t_samples;
        form.b_bound = std::max(form.b_bound, std::abs(normal_form_remainder(boundary, field, gamma0_value, s, t)));
      }
    }
  }
  return form;
}

}  // namespace hc3
