#pragma once

// Truncated formal series  sum_k c_k x^{k / Den}  with integer k in
// [lowest, truncation]. Terms beyond the truncation order are dropped by
// every operation; leading exact zeros are stripped so `lowest` always
// points at a nonzero coefficient (or the series is zero).
//
// T only needs field arithmetic and comparison with T(0), so exact rational
// types work as well as double.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hc3/error.hpp"

namespace hc3 {

/// Exponent alpha = num / den for fractional powers.
struct Rational {
  long num = 0;
  long den = 1;
};

template <typename T, int Den = 8>
class PuiseuxSeries {
 public:
  static constexpr int step_denominator = Den;

  /// Zero series truncated at exponent `truncation` / Den.
  explicit PuiseuxSeries(int truncation = 0) : truncation_(truncation) {}

  PuiseuxSeries(int lowest, std::vector<T> coefficients, int truncation)
      : lowest_(lowest), truncation_(truncation), coef_(std::move(coefficients)) {
    const long keep = static_cast<long>(truncation_) - lowest_ + 1;
    if (keep <= 0) {
      coef_.clear();
    } else if (static_cast<long>(coef_.size()) > keep) {
      coef_.resize(static_cast<std::size_t>(keep));
    }
    normalize();
  }

  static PuiseuxSeries monomial(T c, int exponent, int truncation) {
    return PuiseuxSeries(exponent, std::vector<T>{c}, truncation);
  }

  static PuiseuxSeries constant(T c, int truncation) { return monomial(c, 0, truncation); }

  bool is_zero() const { return coef_.empty(); }
  int lowest_exponent() const { return is_zero() ? truncation_ + 1 : lowest_; }
  int truncation_order() const { return truncation_; }
  int highest_exponent() const { return lowest_ + static_cast<int>(coef_.size()) - 1; }
  const std::vector<T>& coefficients() const { return coef_; }

  /// Coefficient of x^{k/Den}; zero outside the stored range.
  T operator[](int k) const {
    if (is_zero() || k < lowest_ || k > highest_exponent()) return T(0);
    return coef_[static_cast<std::size_t>(k - lowest_)];
  }

  /// Same series with the truncation lowered (never raised).
  PuiseuxSeries truncated(int truncation) const {
    require(truncation <= truncation_, "PuiseuxSeries: cannot raise the truncation order");
    return PuiseuxSeries(lowest_, coef_, truncation);
  }

  /// Multiplies by x^{k/Den}; the truncation moves with the series.
  PuiseuxSeries shifted(int k) const {
    PuiseuxSeries s(lowest_ + k, coef_, truncation_ + k);
    return s;
  }

  friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    return a.truncation_ == b.truncation_ && a.lowest_exponent() == b.lowest_exponent() && a.coef_ == b.coef_;
  }

 private:
  void normalize() {
    std::size_t lead = 0;
    while (lead < coef_.size() && coef_[lead] == T(0)) ++lead;
    if (lead == coef_.size()) {
      coef_.clear();
      lowest_ = 0;
      return;
    }
    if (lead > 0) {
      coef_.erase(coef_.begin(), coef_.begin() + static_cast<std::ptrdiff_t>(lead));
      lowest_ += static_cast<int>(lead);
    }
    while (!coef_.empty() && coef_.back() == T(0)) coef_.pop_back();
  }

  int lowest_ = 0;
  int truncation_ = 0;
  std::vector<T> coef_;
};

namespace detail {

template <typename T, int Den>
void check_truncation(const PuiseuxSeries<T, Den>& a, const PuiseuxSeries<T, Den>& b, const char* op) {
  if (a.truncation_order() != b.truncation_order()) {
    throw InvalidArgument(std::string(op) + ": truncation mismatch");
  }
}

}  // namespace detail

template <typename T, int Den>
PuiseuxSeries<T, Den> series_add(const PuiseuxSeries<T, Den>& a, const PuiseuxSeries<T, Den>& b) {
  detail::check_truncation(a, b, "series_add");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int lo = std::min(a.lowest_exponent(), b.lowest_exponent());
  const int hi = std::max(a.highest_exponent(), b.highest_exponent());
  std::vector<T> c(static_cast<std::size_t>(hi - lo + 1), T(0));
  for (int k = lo; k <= hi; ++k) c[static_cast<std::size_t>(k - lo)] = a[k] + b[k];
  return {lo, std::move(c), a.truncation_order()};
}

template <typename T, int Den>
PuiseuxSeries<T, Den> series_scale(const PuiseuxSeries<T, Den>& a, const T& factor) {
  std::vector<T> c = a.coefficients();
  for (T& x : c) x = x * factor;
  return {a.lowest_exponent(), std::move(c), a.truncation_order()};
}

template <typename T, int Den>
PuiseuxSeries<T, Den> series_sub(const PuiseuxSeries<T, Den>& a, const PuiseuxSeries<T, Den>& b) {
  return series_add(a, series_scale(b, T(-1)));
}

/// Cauchy product; for each output exponent the terms are summed in
/// increasing exponent of the left factor. A factor of negative valuation v
/// pulls unknown terms from beyond the truncation down by |v|, so the result
/// is truncated at trunc + min(0, v_a, v_b).
template <typename T, int Den>
PuiseuxSeries<T, Den> series_mul(const PuiseuxSeries<T, Den>& a, const PuiseuxSeries<T, Den>& b) {
  detail::check_truncation(a, b, "series_mul");
  if (a.is_zero() || b.is_zero()) return PuiseuxSeries<T, Den>(a.truncation_order());
  const int trunc = a.truncation_order() + std::min({0, a.lowest_exponent(), b.lowest_exponent()});
  const int lo = a.lowest_exponent() + b.lowest_exponent();
  const int hi = std::min(a.highest_exponent() + b.highest_exponent(), trunc);
  if (hi < lo) return PuiseuxSeries<T, Den>(trunc);
  std::vector<T> c(static_cast<std::size_t>(hi - lo + 1), T(0));
  for (int k = lo; k <= hi; ++k) {
    T acc(0);
    for (int i = a.lowest_exponent(); i <= a.highest_exponent(); ++i) {
      const int j = k - i;
      if (j < b.lowest_exponent()) break;
      if (j > b.highest_exponent()) continue;
      acc = acc + a[i] * b[j];
    }
    c[static_cast<std::size_t>(k - lo)] = acc;
  }
  return {lo, std::move(c), trunc};
}

/// (1 + s)^alpha = sum_k binom(alpha, k) s^k for s of positive valuation.
template <typename T, int Den>
PuiseuxSeries<T, Den> fractional_power(const PuiseuxSeries<T, Den>& s, Rational alpha) {
  require(alpha.den != 0, "fractional_power: zero denominator");
  const int trunc = s.truncation_order();
  PuiseuxSeries<T, Den> result = PuiseuxSeries<T, Den>::constant(T(1), trunc);
  if (s.is_zero()) return result;
  if (s.lowest_exponent() <= 0) throw InvalidArgument("fractional_power: series must have positive valuation");
  const T a = T(alpha.num) / T(alpha.den);
  T binom(1);
  PuiseuxSeries<T, Den> power = PuiseuxSeries<T, Den>::constant(T(1), trunc);
  for (int k = 1; static_cast<long>(k) * s.lowest_exponent() <= trunc; ++k) {
    binom = binom * (a - T(k - 1)) / T(k);
    power = series_mul(power, s);
    if (power.is_zero()) break;
    result = series_add(result, series_scale(power, binom));
  }
  return result;
}

template <typename T, int Den>
PuiseuxSeries<T, Den> operator+(const PuiseuxSeries<T, Den>& a, const PuiseuxSeries<T, Den>& b) {
  return series_add(a, b);
}
template <typename T, int Den>
PuiseuxSeries<T, Den> operator-(const PuiseuxSeries<T, Den>& a, const PuiseuxSeries<T, Den>& b) {
  return series_sub(a, b);
}
template <typename T, int Den>
PuiseuxSeries<T, Den> operator*(const PuiseuxSeries<T, Den>& a, const PuiseuxSeries<T, Den>& b) {
  return series_mul(a, b);
}

}  // namespace hc3
