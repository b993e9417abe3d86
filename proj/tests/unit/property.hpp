#pragma once

// Tiny property-test helpers: a seeded generator and a loop that reports the
// failing case's index and seed.

#include <cstdint>
#include <random>
#include <vector>

namespace hc3::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::vector<double> vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

/// Runs `body(gen, case_index)` for `cases` cases from a fixed seed.
template <typename Body>
void for_all(int cases, std::uint64_t seed, Body&& body) {
  Gen gen(seed);
  for (int i = 0; i < cases; ++i) body(gen, i);
}

}  // namespace hc3::testing
