#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

// Seeded generators for the property tests; a failing case is reproducible
// from the seed printed by the test.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing
