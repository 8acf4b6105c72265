#pragma once

// Concrete monetary risk measures evaluated on a finite probability space.
// Sign convention: positions are gains, risk values are capital requirements,
// so rho(X + c) = rho(X) - c.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrisk/errors.hpp"
#include "mrisk/space.hpp"

namespace mrisk {

/// Piecewise-constant weight on quantile levels: `values()[j]` applies on
/// (breakpoints[j], breakpoints[j+1]]. Nonnegative, nonincreasing, unit mass.
class RiskSpectrum {
 public:
  RiskSpectrum(std::vector<double> breakpoints, std::vector<double> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.size() < 2 || values_.size() + 1 != breakpoints_.size())
      throw ValidationError("RiskSpectrum: need m+1 breakpoints for m values");
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
      throw ValidationError("RiskSpectrum: breakpoints must run from 0 to 1");
    std::vector<double> masses;
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (!(breakpoints_[j] < breakpoints_[j + 1]))
        throw ValidationError("RiskSpectrum: breakpoints not strictly increasing");
      if (!(values_[j] >= 0.0) || !std::isfinite(values_[j]))
        throw ValidationError("RiskSpectrum: negative weight");
      if (j > 0 && values_[j] > values_[j - 1])
        throw ValidationError("RiskSpectrum: weights must be nonincreasing");
      masses.push_back(values_[j] * (breakpoints_[j + 1] - breakpoints_[j]));
    }
    const double total = detail::stable_sum(masses);
    if (std::abs(total - 1.0) > kProbSumTol)
      throw ValidationError("RiskSpectrum: weights integrate to " + std::to_string(total));
  }

  /// phi = (1/alpha) on (0, alpha]; the spectrum of AV@R_alpha.
  static RiskSpectrum tail(double alpha) {
    detail::check_level(alpha, "RiskSpectrum::tail");
    if (alpha == 1.0) return RiskSpectrum({0.0, 1.0}, {1.0});
    return RiskSpectrum({0.0, alpha, 1.0}, {1.0 / alpha, 0.0});
  }

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }

  /// phi(u) for u in (0,1].
  double operator()(double u) const {
    for (std::size_t j = 0; j < values_.size(); ++j)
      if (u <= breakpoints_[j + 1]) return values_[j];
    return values_.back();
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// E[-X], summed over the sorted law so that the result depends on the law only.
inline double expected_loss(const Distribution& d) {
  double acc = 0.0;
  for (const DistPoint& p : d.points()) acc += p.prob * p.outcome;
  return -acc;
}

inline double expected_loss(const FiniteProbSpace& space, const Position& x) {
  return expected_loss(distribution_of(space, x));
}

/// -ess inf X
inline double worst_case(const FiniteProbSpace& space, const Position& x) {
  require_same_size(space, x.size(), "worst_case");
  return -x.min();
}

/// V@R_alpha(X) = -q+_alpha(X)
inline double var(const FiniteProbSpace& space, const Position& x, double alpha) {
  detail::check_level(alpha, "var");
  return -upper_quantile(distribution_of(space, x), alpha);
}

/// alpha * AV@R_alpha: total loss carried by the lowest alpha of probability
/// mass, the marginal atom contributing proportionally.
inline double lower_tail_loss(const Distribution& d, double alpha) {
  detail::check_level(alpha, "lower_tail_loss");
  double remaining = alpha;
  double acc = 0.0;
  for (const DistPoint& p : d.points()) {
    const double take = std::min(p.prob, remaining);
    acc += take * (-p.outcome);
    remaining -= take;
    if (remaining <= 0.0) break;
  }
  // cumulative mass rounding can leave a sliver at alpha = 1
  if (remaining > 0.0) acc += remaining * (-d.max());
  return acc;
}

/// Average of the losses over the lowest alpha of probability mass.
inline double avar(const Distribution& d, double alpha) {
  detail::check_level(alpha, "avar");
  return lower_tail_loss(d, alpha) / alpha;
}

inline double avar(const FiniteProbSpace& space, const Position& x, double alpha) {
  detail::check_level(alpha, "avar");
  return avar(distribution_of(space, x), alpha);
}

/// (1/beta) log E[exp(-beta X)], shifted by max(-beta X) before exponentiating.
inline double entropic(const FiniteProbSpace& space, const Position& x, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError("entropic: beta must be positive");
  const Distribution d = distribution_of(space, x);
  const double shift = -beta * d.min();
  double acc = 0.0;
  for (const DistPoint& p : d.points()) acc += p.prob * std::exp(-beta * p.outcome - shift);
  return (shift + std::log(acc)) / beta;
}

/// -int_0^1 phi(s) q-_X(s) ds, integrated exactly over the common refinement
/// of the spectrum breakpoints and the cumulative probabilities of X.
inline double spectral(const Distribution& d, const RiskSpectrum& phi) {
  const auto pts = d.points();
  const auto cum = d.cumulative();
  const auto u = phi.breakpoints();
  const auto w = phi.values();
  std::size_t k = 0;  // atom: q- = x_k on (cum[k-1], cum[k]]
  std::size_t j = 0;  // spectrum piece on (u[j], u[j+1]]
  double left = 0.0;
  double acc = 0.0;
  while (k < pts.size() && j < w.size()) {
    const double atom_right = (k + 1 == pts.size()) ? 1.0 : cum[k];
    const double right = std::min(atom_right, u[j + 1]);
    if (right > left) acc += w[j] * pts[k].outcome * (right - left);
    left = std::max(left, right);
    if (atom_right <= right) ++k;
    if (u[j + 1] <= right) ++j;
  }
  return -acc;
}

inline double spectral(const FiniteProbSpace& space, const Position& x,
                       const RiskSpectrum& phi) {
  return spectral(distribution_of(space, x), phi);
}

}  // namespace mrisk
