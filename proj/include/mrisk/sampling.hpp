#pragma once

// Random finite spaces and positions for property checks and sampled oracles.
// Everything is driven by an explicit engine so runs are reproducible.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "mrisk/space.hpp"

namespace mrisk {

using Rng = std::mt19937_64;

enum class PositionShape {
  gaussian,  // continuous outcomes, a.s. distinct
  lattice,   // small integers, many ties
  sparse,    // mostly zero with a few losses
  any,       // one of the above at random
};

/// n in [1, max_atoms]; uniform masses half of the time, otherwise random
/// masses bounded away from zero.
inline FiniteProbSpace random_space(Rng& rng, std::size_t max_atoms, std::size_t min_atoms = 1) {
  std::uniform_int_distribution<std::size_t> size_dist(min_atoms, max_atoms);
  const std::size_t n = size_dist(rng);
  if (std::bernoulli_distribution(0.5)(rng)) return FiniteProbSpace::uniform(n);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<double> p(n);
  for (double& v : p) v = w(rng);
  const double total = detail::stable_sum(p);
  for (double& v : p) v /= total;
  return FiniteProbSpace(std::move(p));
}

inline Position random_position(Rng& rng, std::size_t n, PositionShape shape = PositionShape::any,
                                double scale = 1.0) {
  if (shape == PositionShape::any) {
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: shape = PositionShape::gaussian; break;
      case 1: shape = PositionShape::lattice; break;
      default: shape = PositionShape::sparse; break;
    }
  }
  std::vector<double> x(n);
  switch (shape) {
    case PositionShape::gaussian: {
      std::normal_distribution<double> g(0.0, scale);
      for (double& v : x) v = g(rng);
      break;
    }
    case PositionShape::lattice: {
      std::uniform_int_distribution<int> k(-5, 5);
      for (double& v : x) v = scale * k(rng);
      break;
    }
    default: {
      std::bernoulli_distribution hit(0.25);
      std::uniform_int_distribution<int> k(1, 4);
      for (double& v : x) v = hit(rng) ? -scale * k(rng) : 0.0;
      break;
    }
  }
  return Position(std::move(x));
}

/// Componentwise nonnegative increment; some coordinates stay at zero.
inline Position random_nonnegative(Rng& rng, std::size_t n, double scale = 1.0) {
  std::bernoulli_distribution keep(0.3);
  std::exponential_distribution<double> e(1.0 / scale);
  std::vector<double> x(n);
  for (double& v : x) v = keep(rng) ? 0.0 : e(rng);
  return Position(std::move(x));
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace mrisk
