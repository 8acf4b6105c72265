#pragma once

// First- and second-order stochastic dominance through the V@R / AV@R level
// characterizations. X <= Y in an order means Y is at least as good as X:
//   X <=_FSD Y  iff  V@R_a(X)  >= V@R_a(Y)  for all a in (0,1]
//   X <=_SSD Y  iff  AV@R_a(X) >= AV@R_a(Y) for all a in (0,1]
// On finite supports both universal statements reduce to finitely many levels.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "mrisk/measures.hpp"
#include "mrisk/space.hpp"

namespace mrisk {

/// dominated = true exactly when no witness was found. The witness is a level
/// alpha (for the V@R/AV@R tests) or a threshold t (for the CDF oracles).
struct DominanceVerdict {
  bool dominated = true;
  std::optional<double> witness;
};

struct DominanceOptions {
  double slack = 1e-12;  // zero gives the strict mode for exactly representable inputs
};

namespace detail {

// Union of the cumulative-probability breakpoints of both laws, plus 1.
// Levels closer than `merge` are one level: the same mass summed in a
// different order must not open a spurious sliver between them.
inline std::vector<double> merged_levels(const Distribution& a, const Distribution& b,
                                         double merge) {
  std::vector<double> levels;
  for (double c : a.cumulative()) if (c > 0.0 && c < 1.0 - merge) levels.push_back(c);
  for (double c : b.cumulative()) if (c > 0.0 && c < 1.0 - merge) levels.push_back(c);
  std::sort(levels.begin(), levels.end());
  std::vector<double> out;
  for (double c : levels)
    if (out.empty() || c - out.back() > merge) out.push_back(c);
  out.push_back(1.0);
  return out;
}

inline std::vector<double> merged_outcomes(const Distribution& a, const Distribution& b) {
  std::vector<double> ts;
  for (const DistPoint& p : a.points()) ts.push_back(p.outcome);
  for (const DistPoint& p : b.points()) ts.push_back(p.outcome);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

// int_{-inf}^t F(s) ds = E[(t - X)^+]
inline double integrated_cdf(const Distribution& d, double t) {
  double acc = 0.0;
  for (const DistPoint& p : d.points())
    if (p.outcome < t) acc += p.prob * (t - p.outcome);
  return acc;
}

}  // namespace detail

/// alpha -> alpha * AV@R_alpha is piecewise linear with kinks only at
/// cumulative probabilities of either law, and vanishes at 0; checking every
/// kink and alpha = 1 decides the statement for all levels.
inline DominanceVerdict ssd_dominated(const Distribution& dx, const Distribution& dy,
                                      const DominanceOptions& opts = {}) {
  for (double a : detail::merged_levels(dx, dy, opts.slack)) {
    if (lower_tail_loss(dx, a) < lower_tail_loss(dy, a) - opts.slack) return {false, a};
  }
  return {};
}

inline DominanceVerdict ssd_dominated(const FiniteProbSpace& space, const Position& x,
                                      const Position& y, const DominanceOptions& opts = {}) {
  return ssd_dominated(distribution_of(space, x), distribution_of(space, y), opts);
}

/// V@R_alpha is constant on each [b_j, b_{j+1}) between merged breakpoints, so
/// one interior level per piece decides the statement; alpha = 1 is checked
/// separately because of the max-outcome convention there.
inline DominanceVerdict fsd_dominated(const Distribution& dx, const Distribution& dy,
                                      const DominanceOptions& opts = {}) {
  const std::vector<double> levels = detail::merged_levels(dx, dy, opts.slack);
  double left = 0.0;
  std::vector<double> probes;
  for (double b : levels) {
    probes.push_back(left + 0.5 * (b - left));
    left = b;
  }
  probes.push_back(1.0);
  for (double a : probes) {
    const double vx = -upper_quantile(dx, a);
    const double vy = -upper_quantile(dy, a);
    if (vx < vy - opts.slack) return {false, a};
  }
  return {};
}

inline DominanceVerdict fsd_dominated(const FiniteProbSpace& space, const Position& x,
                                      const Position& y, const DominanceOptions& opts = {}) {
  return fsd_dominated(distribution_of(space, x), distribution_of(space, y), opts);
}

/// Independent SSD check on integrated distribution functions: X <=_SSD Y iff
/// int F_X >= int F_Y up to every t. Both sides are piecewise linear in t with
/// kinks at outcomes; their difference is constant past the largest one, so
/// the outcomes themselves are the only thresholds to check.
inline DominanceVerdict ssd_oracle_verdict(const Distribution& dx, const Distribution& dy,
                                           const DominanceOptions& opts = {}) {
  for (double t : detail::merged_outcomes(dx, dy)) {
    if (detail::integrated_cdf(dx, t) < detail::integrated_cdf(dy, t) - opts.slack)
      return {false, t};
  }
  return {};
}

inline bool ssd_oracle(const Distribution& dx, const Distribution& dy,
                       const DominanceOptions& opts = {}) {
  return ssd_oracle_verdict(dx, dy, opts).dominated;
}

/// Pointwise CDF ordering F_X >= F_Y; equivalent to X <=_FSD Y.
inline DominanceVerdict fsd_oracle_verdict(const Distribution& dx, const Distribution& dy,
                                           const DominanceOptions& opts = {}) {
  for (double t : detail::merged_outcomes(dx, dy))
    if (cdf(dx, t) < cdf(dy, t) - opts.slack) return {false, t};
  return {};
}

}  // namespace mrisk
