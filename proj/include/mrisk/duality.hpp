#pragma once

// Robust representations rho(X) = sup_Q { E^Q[-X] - gamma(Q) } over densities
// dQ/dP, with closed-form maximizers for the worst-case, AV@R and entropic
// measures, and a sampled lower bound on the conjugate
//   rho*(Y) = sup_{X in A_rho} E[-XY].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mrisk/errors.hpp"
#include "mrisk/extended_real.hpp"
#include "mrisk/measures.hpp"
#include "mrisk/risk_measure.hpp"
#include "mrisk/sampling.hpp"
#include "mrisk/space.hpp"

namespace mrisk {

/// Outcome of validating a candidate density.
struct DualConditions {
  bool ok = true;
  std::string diagnostics;
  explicit operator bool() const { return ok; }
};

/// Checks y >= 0 and E[y] = 1 (within 1e-12).
inline DualConditions check_dual_conditions(const FiniteProbSpace& space,
                                            std::span<const double> y) {
  DualConditions r;
  if (y.size() != space.size()) {
    r.ok = false;
    r.diagnostics = "length " + std::to_string(y.size()) + " does not match " +
                    std::to_string(space.size()) + " atoms";
    return r;
  }
  std::ostringstream diag;
  std::vector<double> weighted(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] >= 0.0) || !std::isfinite(y[i])) {
      r.ok = false;
      diag << "entry " << i << " is " << y[i] << " (must be finite and >= 0); ";
    }
    weighted[i] = space.prob(i) * y[i];
  }
  const double mean = detail::stable_sum(weighted);
  if (!(std::abs(mean - 1.0) <= kProbSumTol)) {
    r.ok = false;
    diag.precision(17);
    diag << "E[Y] = " << mean << " (must be 1)";
  }
  r.diagnostics = diag.str();
  return r;
}

/// dQ/dP for a probability Q absolutely continuous with respect to P.
class Density {
 public:
  Density(const FiniteProbSpace& space, std::vector<double> values) : values_(std::move(values)) {
    const DualConditions c = check_dual_conditions(space, values_);
    if (!c) throw ValidationError("Density: " + c.diagnostics);
  }

  /// Q = P
  static Density unit(const FiniteProbSpace& space) {
    return Density(space, std::vector<double>(space.size(), 1.0));
  }
  /// Q = point mass on atom k
  static Density dirac(const FiniteProbSpace& space, std::size_t k) {
    std::vector<double> y(space.size(), 0.0);
    y.at(k) = 1.0 / space.prob(k);
    return Density(space, std::move(y));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double max() const { return *std::max_element(values_.begin(), values_.end()); }

 private:
  std::vector<double> values_;
};

/// E^Q[-X]
inline double expected_loss_under(const FiniteProbSpace& space, const Position& x,
                                  const Density& q) {
  return -expectation(space, x, q.values());
}

inline ExtendedReal penalty_worst_case(const FiniteProbSpace& space, const Density& q) {
  require_same_size(space, q.size(), "penalty_worst_case");
  return 0.0;
}

/// 0 on {dQ/dP <= 1/alpha}, +inf elsewhere.
inline ExtendedReal penalty_avar(const FiniteProbSpace& space, const Density& q, double alpha) {
  detail::check_level(alpha, "penalty_avar");
  require_same_size(space, q.size(), "penalty_avar");
  if (q.max() <= 1.0 / alpha + 1e-12) return 0.0;
  return ExtendedReal::infinity();
}

/// H(Q|P)/beta with 0 log 0 = 0.
inline ExtendedReal penalty_entropic(const FiniteProbSpace& space, const Density& q,
                                     double beta) {
  if (!(beta > 0.0)) throw DomainError("penalty_entropic: beta must be positive");
  require_same_size(space, q.size(), "penalty_entropic");
  double h = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > 0.0) h += space.prob(i) * q[i] * std::log(q[i]);
  return std::max(h, 0.0) / beta;
}

/// Greedy tail density: 1/alpha on the lowest outcomes until mass alpha is
/// filled, the marginal atom fractionally. Ties go to the lower atom index.
inline Density avar_maximizer(const FiniteProbSpace& space, const Position& x, double alpha) {
  detail::check_level(alpha, "avar_maximizer");
  require_same_size(space, x.size(), "avar_maximizer");
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> y(x.size(), 0.0);
  double remaining = alpha;
  for (std::size_t idx : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(space.prob(idx), remaining);
    y[idx] = take / (space.prob(idx) * alpha);
    remaining -= take;
  }
  return Density(space, std::move(y));
}

/// Exponential tilt y_i proportional to exp(-beta x_i).
inline Density gibbs_maximizer(const FiniteProbSpace& space, const Position& x, double beta) {
  if (!(beta > 0.0)) throw DomainError("gibbs_maximizer: beta must be positive");
  require_same_size(space, x.size(), "gibbs_maximizer");
  double shift = -beta * x[0];
  for (double v : x) shift = std::max(shift, -beta * v);
  std::vector<double> y(x.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = std::exp(-beta * x[i] - shift);
    norm += space.prob(i) * y[i];
  }
  for (double& v : y) v /= norm;
  return Density(space, std::move(y));
}

/// Dirac density on the (first) atom with the smallest outcome.
inline Density worst_case_maximizer(const FiniteProbSpace& space, const Position& x) {
  require_same_size(space, x.size(), "worst_case_maximizer");
  const auto it = std::min_element(x.begin(), x.end());
  return Density::dirac(space, static_cast<std::size_t>(it - x.begin()));
}

/// Penalty gamma and, when known, the exact argmax of the robust representation.
struct DualRepresentation {
  std::function<ExtendedReal(const Density&)> penalty;
  std::function<Density(const Position&)> maximizer;  // may be empty
};

inline DualRepresentation dual_worst_case(const FiniteProbSpace& space) {
  return {[space](const Density& q) { return penalty_worst_case(space, q); },
          [space](const Position& x) { return worst_case_maximizer(space, x); }};
}

inline DualRepresentation dual_avar(const FiniteProbSpace& space, double alpha) {
  detail::check_level(alpha, "dual_avar");
  return {[space, alpha](const Density& q) { return penalty_avar(space, q, alpha); },
          [space, alpha](const Position& x) { return avar_maximizer(space, x, alpha); }};
}

inline DualRepresentation dual_entropic(const FiniteProbSpace& space, double beta) {
  if (!(beta > 0.0)) throw DomainError("dual_entropic: beta must be positive");
  return {[space, beta](const Density& q) { return penalty_entropic(space, q, beta); },
          [space, beta](const Position& x) { return gibbs_maximizer(space, x, beta); }};
}

/// Dual representation of a spec, for the kinds that have one in closed form.
inline std::optional<DualRepresentation> dual_of(const FiniteProbSpace& space,
                                                 const RiskMeasureSpec& rho) {
  const auto& p = rho.params();
  if (std::holds_alternative<RiskMeasureSpec::WorstCase>(p)) return dual_worst_case(space);
  if (const auto* a = std::get_if<RiskMeasureSpec::Avar>(&p)) return dual_avar(space, a->alpha);
  if (const auto* e = std::get_if<RiskMeasureSpec::Entropic>(&p))
    return dual_entropic(space, e->beta);
  return std::nullopt;
}

/// max over candidates (plus the exact maximizer, if any) of E^Q[-X] - gamma(Q).
/// A lower bound on rho(X); equal to it once the maximizer is included.
inline double dual_evaluate(const FiniteProbSpace& space, const Position& x,
                            const DualRepresentation& rep, std::span<const Density> candidates) {
  require_same_size(space, x.size(), "dual_evaluate");
  std::optional<double> best;
  auto consider = [&](const Density& q) {
    const ExtendedReal gamma = rep.penalty(q);
    if (gamma.is_infinite()) return;
    const double v = expected_loss_under(space, x, q) - gamma.value();
    if (!best || v > *best) best = v;
  };
  for (const Density& q : candidates) consider(q);
  if (rep.maximizer) consider(rep.maximizer(x));
  if (!best) throw DomainError("dual_evaluate: no candidate with finite penalty");
  return *best;
}

struct ConjugateOptions {
  double divergence_threshold = 1e3;  // bound beyond which Y is flagged infeasible
  int max_witness_exponent = 27;      // escalating witnesses scale up to 2^27
};

struct ConjugateBound {
  double value = -std::numeric_limits<double>::infinity();
  bool infeasible_direction = false;
  std::size_t samples = 0;
  std::size_t failed_evaluations = 0;
  std::optional<Position> best;  // acceptable position attaining `value`
};

/// Sampled lower bound on sup_{X in A_rho} E[-XY]. Each sample is projected to
/// the boundary of A_rho via X <- X + rho(X)*1. The sample stream mixes a
/// constant position, escalating loss indicators, random positions and local
/// perturbations of the incumbent; the bound is a running maximum, so it is
/// nondecreasing in the budget for a fixed seed.
inline ConjugateBound conjugate_lower_bound(const FiniteProbSpace& space,
                                            const RiskMeasureSpec& rho, const Density& y,
                                            std::size_t sample_budget, std::uint64_t seed,
                                            const ConjugateOptions& opts = {}) {
  require_same_size(space, y.size(), "conjugate_lower_bound");
  const std::size_t n = space.size();
  Rng rng(seed);
  ConjugateBound out;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> atom(0, n - 1);

  auto sample = [&](std::size_t i) -> Position {
    if (i == 0) return Position::constant(n, 0.0);
    switch (i % 4) {
      case 1: {
        const int exponent = static_cast<int>((i / 4) % static_cast<std::size_t>(
                                                             opts.max_witness_exponent + 1));
        const double t = std::ldexp(1.0, exponent);
        std::vector<double> v(n, 0.0);
        if (coin(rng)) {
          v[atom(rng)] = -t;
        } else {
          for (double& e : v)
            if (coin(rng)) e = -t;
        }
        return Position(std::move(v));
      }
      case 2:
        return random_position(rng, n, PositionShape::any,
                               std::exp(uniform_real(rng, -3.0, 3.0)));
      default: {
        if (!out.best) return random_position(rng, n);
        const double sigma = std::exp(uniform_real(rng, std::log(1e-7), 0.0));
        std::vector<double> v(out.best->begin(), out.best->end());
        for (double& e : v) e += sigma * gauss(rng);
        return Position(std::move(v));
      }
    }
  };

  for (std::size_t i = 0; i < sample_budget; ++i) {
    const Position x = sample(i);
    ++out.samples;
    double shift;
    try {
      shift = rho(space, x);
    } catch (const Error&) {
      ++out.failed_evaluations;
      continue;
    }
    const Position accepted = x + shift;
    const double v = -expectation(space, accepted, y.values());
    if (v > out.value) {
      out.value = v;
      out.best = accepted;
    }
  }
  out.infeasible_direction = out.value > opts.divergence_threshold;
  return out;
}

}  // namespace mrisk
