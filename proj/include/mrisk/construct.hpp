#pragma once

// Factories for risk measures: cash-additive envelopes, optimized certainty
// equivalents, loss-based shortfall risk and finite mixtures of AV@R.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mrisk/errors.hpp"
#include "mrisk/extended_real.hpp"
#include "mrisk/measures.hpp"
#include "mrisk/search.hpp"
#include "mrisk/space.hpp"

namespace mrisk {

enum class LossDirection {
  increasing,     // shortfall losses, applied to -X
  nonincreasing,  // OCE losses, applied to X
};

/// Scalar loss l: R -> R u {+inf} with a declared monotonicity direction.
class LossFunction {
 public:
  LossFunction(std::string name, std::function<double(double)> eval, bool convex,
               LossDirection direction)
      : name_(std::move(name)), eval_(std::move(eval)), convex_(convex), direction_(direction) {
    if (!eval_) throw ValidationError("LossFunction: empty evaluator");
    validate();
  }

  const std::string& name() const { return name_; }
  bool convex() const { return convex_; }
  LossDirection direction() const { return direction_; }
  double operator()(double x) const { return eval_(x); }

 private:
  // Spot check on a fixed grid: the direction holds and the loss moves.
  void validate() const {
    double prev = 0.0;
    bool moved = false;
    for (int k = -200; k <= 200; ++k) {
      const double x = 0.25 * k;
      const double v = eval_(x);
      if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
        throw ValidationError("LossFunction " + name_ + ": invalid value at " +
                              std::to_string(x));
      if (k > -200) {
        const bool ok = (direction_ == LossDirection::increasing) ? v >= prev : v <= prev;
        if (!ok)
          throw ValidationError("LossFunction " + name_ +
                                ": violates its declared direction near " + std::to_string(x));
        if (v != prev) moved = true;
      }
      prev = v;
    }
    if (!moved) throw ValidationError("LossFunction " + name_ + ": identically constant");
  }

  std::string name_;
  std::function<double(double)> eval_;
  bool convex_;
  LossDirection direction_;
};

/// The built-in loss catalogue. Each entry exists in both directions:
/// the nonincreasing form is the increasing form applied to -x.
namespace loss {

inline LossFunction linear(LossDirection dir) {
  const double sgn = (dir == LossDirection::increasing) ? 1.0 : -1.0;
  return {"linear", [sgn](double x) { return sgn * x; }, true, dir};
}

/// increasing: e^{beta x}; nonincreasing: (e^{-beta x} - 1) / beta.
inline LossFunction exponential(double beta, LossDirection dir) {
  if (!(beta > 0.0)) throw DomainError("loss::exponential: beta must be positive");
  if (dir == LossDirection::increasing)
    return {"exponential", [beta](double x) { return std::exp(beta * x); }, true, dir};
  return {"exponential", [beta](double x) { return std::expm1(-beta * x) / beta; }, true, dir};
}

/// increasing: max(x,0)/alpha; nonincreasing: max(-x,0)/alpha.
inline LossFunction hinge(double alpha, LossDirection dir) {
  detail::check_level(alpha, "loss::hinge");
  const double sgn = (dir == LossDirection::increasing) ? 1.0 : -1.0;
  return {"hinge", [alpha, sgn](double x) { return std::max(sgn * x, 0.0) / alpha; }, true, dir};
}

/// increasing: max(x,0)^p; nonincreasing: max(-x,0)^p. Convex for p >= 1.
inline LossFunction power(double p, LossDirection dir) {
  if (!(p > 0.0)) throw DomainError("loss::power: exponent must be positive");
  const double sgn = (dir == LossDirection::increasing) ? 1.0 : -1.0;
  return {"power", [p, sgn](double x) { return std::pow(std::max(sgn * x, 0.0), p); }, p >= 1.0,
          dir};
}

}  // namespace loss

/// Probability measure on (0,1] with finite support; weights sum to one.
class MixtureMeasure {
 public:
  MixtureMeasure(std::vector<double> levels, std::vector<double> weights)
      : levels_(std::move(levels)), weights_(std::move(weights)) {
    if (levels_.empty() || levels_.size() != weights_.size())
      throw ValidationError("MixtureMeasure: need matching, non-empty levels and weights");
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      if (!(levels_[i] > 0.0 && levels_[i] <= 1.0))
        throw ValidationError("MixtureMeasure: level outside (0,1]");
      if (!(weights_[i] > 0.0)) throw ValidationError("MixtureMeasure: non-positive weight");
    }
    if (std::abs(detail::stable_sum(weights_) - 1.0) > kProbSumTol)
      throw ValidationError("MixtureMeasure: weights do not sum to one");
  }

  static MixtureMeasure dirac(double level) { return MixtureMeasure({level}, {1.0}); }

  std::span<const double> levels() const { return levels_; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> levels_;
  std::vector<double> weights_;
};

struct EnvelopeOptions {
  bool convex = true;                 // selects golden-section vs. grid scan
  std::optional<double> start;        // defaults to E[X]
  double scan_radius = 100.0;         // non-convex path only
  std::size_t scan_cells = 4000;
  BracketPolicy bracket{};
};

struct EnvelopeResult {
  double value;
  double argmin;  // the cash amount r* realizing the infimum
};

/// Cash-additive envelope inf_r { phi(X - r*1) - r }. `phi` maps a Position to
/// a double or an ExtendedReal.
template <class Phi>
EnvelopeResult envelope(const FiniteProbSpace& space, Phi&& phi, const Position& x,
                        const EnvelopeOptions& opts = {}) {
  require_same_size(space, x.size(), "envelope");
  auto g = [&](double r) -> double {
    const double v = detail::as_double(phi(x - r));
    return v - r;
  };
  const double start = opts.start.value_or(expectation(space, x));
  Minimum m;
  try {
    m = opts.convex ? minimize_convex(g, start, opts.bracket)
                    : minimize_scan(g, start, opts.scan_radius, opts.scan_cells, opts.bracket);
  } catch (const UnboundedError& e) {
    throw UnboundedError(std::string("envelope unbounded below: ") + e.what());
  }
  if (!std::isfinite(m.value)) throw UnboundedError("envelope: no finite value found");
  return {m.value, m.arg};
}

/// Optimized certainty equivalent: envelope of Z -> E[l(Z)] for nonincreasing l.
inline double oce(const FiniteProbSpace& space, const Position& x, const LossFunction& l,
                  const BracketPolicy& bracket = {}) {
  if (l.direction() != LossDirection::nonincreasing)
    throw ValidationError("oce: loss must be nonincreasing");
  auto phi = [&](const Position& z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) acc += space.prob(i) * l(z[i]);
    return acc;
  };
  EnvelopeOptions opts;
  opts.convex = l.convex();
  opts.bracket = bracket;
  const EnvelopeResult r = envelope(space, phi, x, opts);
  return r.value;
}

/// inf{s | E[l(-X - s)] <= r0} for increasing l.
inline double shortfall(const FiniteProbSpace& space, const Position& x, const LossFunction& l,
                        double r0, const BracketPolicy& bracket = {}) {
  require_same_size(space, x.size(), "shortfall");
  if (l.direction() != LossDirection::increasing)
    throw ValidationError("shortfall: loss must be increasing");
  auto expected_loss_at = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += space.prob(i) * l(-x[i] - s);
    return acc;
  };
  // g(s) must be nonincreasing; every evaluated pair is checked against it.
  std::map<double, double> seen;
  auto feasible = [&](double s) {
    const double v = expected_loss_at(s);
    if (std::isnan(v)) throw ValidationError("shortfall: invalid loss (NaN)");
    auto [it, inserted] = seen.emplace(s, v);
    if (inserted) {
      if (it != seen.begin() && std::prev(it)->second < v)
        throw ValidationError("shortfall: invalid loss, expected loss increases in s");
      if (std::next(it) != seen.end() && std::next(it)->second > v)
        throw ValidationError("shortfall: invalid loss, expected loss increases in s");
    }
    return v <= r0;
  };
  try {
    return find_threshold(feasible, -expectation(space, x), bracket).hi;
  } catch (const UnboundedError& e) {
    throw InfeasibleError(std::string("shortfall: infeasible r0: ") + e.what());
  }
}

/// sum_i w_i AV@R_{alpha_i}(X)
inline double kusuoka_mixture(const FiniteProbSpace& space, const Position& x,
                              const MixtureMeasure& m) {
  const Distribution d = distribution_of(space, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.levels().size(); ++i)
    acc += m.weights()[i] * avar(d, m.levels()[i]);
  return acc;
}

/// phi(u) = sum_i (w_i / alpha_i) 1{u <= alpha_i}
inline RiskSpectrum spectrum_from_mixture(const MixtureMeasure& m) {
  std::vector<double> levels(m.levels().begin(), m.levels().end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<double> breakpoints{0.0};
  std::vector<double> values;
  for (double level : levels) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.levels().size(); ++i)
      if (m.levels()[i] >= level) v += m.weights()[i] / m.levels()[i];
    breakpoints.push_back(level);
    values.push_back(v);
  }
  if (breakpoints.back() < 1.0) {
    breakpoints.push_back(1.0);
    values.push_back(0.0);
  }
  return RiskSpectrum(std::move(breakpoints), std::move(values));
}

}  // namespace mrisk
