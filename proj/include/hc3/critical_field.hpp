#pragma once

// Local critical field on the unit disc: the solution H of
// lambda1(kappa H) = kappa^2, the lower/upper local fields (first and last
// crossing of kappa^2 along an H scan) and detection of the kappa range
// where the two coincide.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hc3/constants.hpp"
#include "hc3/disc_spectrum.hpp"
#include "hc3/error.hpp"
#include "hc3/optimize.hpp"

namespace hc3 {

/// lambda1_disc memoized by B. Concurrent lookups share the lock; inserts
/// take it exclusively.
class Lambda1Cache {
 public:
  explicit Lambda1Cache(const DeGennesConstants& constants = default_constants(), RadialGrid grid = {})
      : constants_(&constants), grid_(grid) {}

  double operator()(double B) const {
    {
      std::shared_lock lock(mutex_);
      if (auto it = values_.find(B); it != values_.end()) return it->second;
    }
    const double value = lambda1_disc(B, *constants_, grid_).lambda1;
    std::unique_lock lock(mutex_);
    values_.emplace(B, value);
    return value;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
  }

  const DeGennesConstants& constants() const { return *constants_; }
  const RadialGrid& grid() const { return grid_; }

 private:
  const DeGennesConstants* constants_;
  RadialGrid grid_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<double, double> values_;
};

/// kappa / Theta0 + C1 / Theta0^{3/2}.
inline double hc3_asymptotic(double kappa, const DeGennesConstants& c) {
  return kappa / c.theta0 + c.C1 / std::pow(c.theta0, 1.5);
}

struct CriticalFieldResult {
  double kappa = 0.0;
  double H = 0.0;
  double residual = 0.0;  // lambda1(kappa H) - kappa^2
  std::pair<double, double> bracket{0.0, 0.0};
  double lower_local = 0.0;
  double upper_local = 0.0;
  bool flagged = false;  // local fields differ: below the monotone regime

  double asymptotic_gap(const DeGennesConstants& c) const { return H - hc3_asymptotic(kappa, c); }
};

/// Root of lambda1(kappa H) = kappa^2 in the bracket seed +- 2.
inline CriticalFieldResult hc3_local(double kappa, const Lambda1Cache& lambda1) {
  require(kappa > 0.0 && std::isfinite(kappa), "hc3_local: kappa must be positive");
  const DeGennesConstants& c = lambda1.constants();
  const double seed = hc3_asymptotic(kappa, c);
  const double k2 = kappa * kappa;
  auto g = [&](double H) { return lambda1(kappa * H) - k2; };
  CriticalFieldResult r;
  r.kappa = kappa;
  r.bracket = {std::max(seed - 2.0, 1e-6), seed + 2.0};
  try {
    r.H = bracketed_root(g, r.bracket.first, r.bracket.second, 1e-6 * k2);
  } catch (const SolverError&) {
    throw SolverError("hc3_local: lambda1(kappa H) does not cross kappa^2 in the bracket (kappa below the monotone regime?)");
  }
  r.residual = g(r.H);
  r.lower_local = r.upper_local = r.H;
  return r;
}

inline CriticalFieldResult hc3_local(double kappa) { return hc3_local(kappa, Lambda1Cache{}); }

struct LocalFields {
  double lower = 0.0;
  double upper = 0.0;
  bool monotone = true;  // lambda1(kappa H) strictly increasing along the scan
};

/// Scan H over seed +- 3 in steps of 0.05. lower is the first H with
/// lambda1(kappa H) >= kappa^2, upper the last crossing from below; both are
/// refined by bisection.
inline LocalFields local_fields(double kappa, const Lambda1Cache& lambda1, double half_width = 3.0,
                                double step = 0.05) {
  require(kappa > 0.0 && std::isfinite(kappa), "local_fields: kappa must be positive");
  const DeGennesConstants& c = lambda1.constants();
  const double seed = hc3_asymptotic(kappa, c);
  const double k2 = kappa * kappa;
  auto g = [&](double H) { return lambda1(kappa * H) - k2; };
  const double start = std::max(seed - half_width, step);
  const auto count = static_cast<std::size_t>(std::floor((seed + half_width - start) / step)) + 1;
  std::vector<double> H(count), v(count);
  for (std::size_t i = 0; i < count; ++i) {
    H[i] = start + step * static_cast<double>(i);
    v[i] = g(H[i]);
  }
  LocalFields f;
  for (std::size_t i = 1; i < count; ++i) f.monotone = f.monotone && v[i] > v[i - 1];
  auto refine = [&](std::size_t i) {  // crossing in (H[i-1], H[i]]
    double lo = H[i - 1], hi = H[i];
    const double tol = 1e-13 * std::max(1.0, hi);
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) >= 0.0) hi = mid; else lo = mid;
    }
    return hi;
  };
  std::optional<std::size_t> first, last;
  if (v[0] >= 0.0) throw SolverError("local_fields: lambda1 already above kappa^2 at the bottom of the scan");
  for (std::size_t i = 1; i < count; ++i) {
    if (v[i] >= 0.0 && v[i - 1] < 0.0) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first || v.back() < 0.0) throw SolverError("local_fields: no crossing of kappa^2 in the scan range");
  f.lower = refine(*first);
  f.upper = *last == *first ? f.lower : refine(*last);
  return f;
}

/// hc3_local plus the local fields; flagged when they differ by more than
/// 1e-6 relative.
inline CriticalFieldResult critical_field(double kappa, const Lambda1Cache& lambda1) {
  CriticalFieldResult r = hc3_local(kappa, lambda1);
  const LocalFields f = local_fields(kappa, lambda1);
  r.lower_local = f.lower;
  r.upper_local = f.upper;
  r.flagged = !f.monotone || std::abs(f.upper - f.lower) > 1e-6 * std::abs(f.upper);
  return r;
}

struct Kappa0Detection {
  double kappa0 = 0.0;
  bool satisfied = true;  // false: no sampled kappa qualifies, kappa0 is the sweep maximum
  std::vector<double> kappas;
  std::vector<bool> coincident;
};

/// Smallest sampled kappa from which on every sampled kappa has coinciding
/// local fields and a strictly increasing lambda1 along its H scan.
inline Kappa0Detection detect_kappa0(const std::vector<double>& kappas, const Lambda1Cache& lambda1) {
  require(!kappas.empty() && std::is_sorted(kappas.begin(), kappas.end()), "detect_kappa0: need a sorted sweep");
  Kappa0Detection d;
  d.kappas = kappas;
  d.coincident.resize(kappas.size());
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    try {
      const LocalFields f = local_fields(kappas[i], lambda1);
      d.coincident[i] = f.monotone && std::abs(f.upper - f.lower) <= 1e-6 * std::abs(f.upper);
    } catch (const SolverError&) {
      d.coincident[i] = false;
    }
  }
  std::size_t start = kappas.size();
  while (start > 0 && d.coincident[start - 1]) --start;
  if (start == kappas.size()) {
    d.kappa0 = kappas.back();
    d.satisfied = false;
  } else {
    d.kappa0 = kappas[start];
  }
  return d;
}

/// Default sweep kappa = 0.5, 1.0, ..., 10.
inline std::vector<double> default_kappa_sweep(double step = 0.5) {
  std::vector<double> k;
  for (double x = step; x <= 10.0 + 1e-12; x += step) k.push_back(x);
  return k;
}

}  // namespace hc3
