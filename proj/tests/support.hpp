#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nlmh/dynamics.hpp"
#include "nlmh/grid.hpp"
#include "nlmh/spectral.hpp"

namespace nlmh::test {

// White noise in [-1, 1); deliberately not band-limited.
inline ScalarField noise(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ScalarField f(g);
  for (double& v : f.values) v = 2.0 * uniform01(rng()) - 1.0;
  return f;
}

inline ScalarField zero_mean_noise(const Grid& g, std::uint64_t seed) {
  ScalarField f = noise(g, seed);
  const double m = mean(f);
  for (double& v : f.values) v -= m;
  return f;
}

inline double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

inline double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace nlmh::test
