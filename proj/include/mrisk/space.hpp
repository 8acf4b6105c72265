#pragma once

// Finite probability spaces, positions on them, their laws, and the two
// quantile conventions used by the quantile-based risk measures.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrisk/errors.hpp"

namespace mrisk {

/// Tolerance on probability totals.
inline constexpr double kProbSumTol = 1e-12;

/// Default tolerance for comparing risk values.
inline constexpr double kRiskTol = 1e-9;

namespace detail {

// Neumaier-compensated sum; probability totals are validated at 1e-12 and
// long vectors of small masses drift past that with naive accumulation.
inline double stable_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

inline void check_level(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError(std::string(who) + ": level must lie in (0,1], got " +
                      std::to_string(alpha));
}

}  // namespace detail

/// (Omega, F, P) on finitely many atoms, each with strictly positive mass.
class FiniteProbSpace {
 public:
  explicit FiniteProbSpace(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ValidationError("FiniteProbSpace: no atoms");
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (!(probs_[i] > 0.0) || !std::isfinite(probs_[i]))
        throw ValidationError("FiniteProbSpace: atom " + std::to_string(i) +
                              " has non-positive probability");
    }
    const double total = detail::stable_sum(probs_);
    if (std::abs(total - 1.0) > kProbSumTol)
      throw ValidationError("FiniteProbSpace: probabilities sum to " +
                            std::to_string(total));
  }
  FiniteProbSpace(std::initializer_list<double> probs)
      : FiniteProbSpace(std::vector<double>(probs)) {}

  static FiniteProbSpace uniform(std::size_t n) {
    if (n == 0) throw ValidationError("FiniteProbSpace: no atoms");
    return FiniteProbSpace(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// A random payoff: one finite outcome per atom. Positive numbers are gains.
class Position {
 public:
  Position() = default;
  explicit Position(std::vector<double> outcomes) : outcomes_(std::move(outcomes)) {
    for (double x : outcomes_)
      if (!std::isfinite(x)) throw ValidationError("Position: non-finite outcome");
  }
  Position(std::initializer_list<double> outcomes)
      : Position(std::vector<double>(outcomes)) {}

  static Position constant(std::size_t n, double c) {
    return Position(std::vector<double>(n, c));
  }

  std::size_t size() const { return outcomes_.size(); }
  double operator[](std::size_t i) const { return outcomes_[i]; }
  std::span<const double> values() const { return outcomes_; }
  auto begin() const { return outcomes_.begin(); }
  auto end() const { return outcomes_.end(); }

  bool is_constant() const {
    return std::adjacent_find(outcomes_.begin(), outcomes_.end(),
                              std::not_equal_to<>()) == outcomes_.end();
  }

  double min() const { return *std::min_element(outcomes_.begin(), outcomes_.end()); }
  double max() const { return *std::max_element(outcomes_.begin(), outcomes_.end()); }

  /// X + c*1
  friend Position operator+(const Position& x, double c) {
    std::vector<double> out(x.outcomes_);
    for (double& v : out) v += c;
    return Position(std::move(out));
  }
  friend Position operator-(const Position& x, double c) { return x + (-c); }

  friend Position operator+(const Position& x, const Position& y) {
    if (x.size() != y.size()) throw DimensionError("Position: length mismatch in sum");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + y[i];
    return Position(std::move(out));
  }

  friend Position operator*(double a, const Position& x) {
    std::vector<double> out(x.outcomes_);
    for (double& v : out) v *= a;
    return Position(std::move(out));
  }

  friend bool operator==(const Position&, const Position&) = default;

 private:
  std::vector<double> outcomes_;
};

/// lambda*X + (1-lambda)*Y
inline Position mix(double lambda, const Position& x, const Position& y) {
  if (x.size() != y.size()) throw DimensionError("mix: length mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = lambda * x[i] + (1.0 - lambda) * y[i];
  return Position(std::move(out));
}

inline void require_same_size(const FiniteProbSpace& space, std::size_t n,
                              const char* who) {
  if (space.size() != n)
    throw DimensionError(std::string(who) + ": expected " + std::to_string(space.size()) +
                         " entries, got " + std::to_string(n));
}

struct DistPoint {
  double outcome;
  double prob;
  friend bool operator==(const DistPoint&, const DistPoint&) = default;
};

/// Law of a position: outcomes strictly increasing, masses strictly positive.
class Distribution {
 public:
  explicit Distribution(std::vector<DistPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw ValidationError("Distribution: empty");
    std::vector<double> masses;
    masses.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!(points_[i].prob > 0.0))
        throw ValidationError("Distribution: non-positive mass");
      if (i > 0 && !(points_[i - 1].outcome < points_[i].outcome))
        throw ValidationError("Distribution: outcomes not strictly increasing");
      masses.push_back(points_[i].prob);
    }
    if (std::abs(detail::stable_sum(masses) - 1.0) > kProbSumTol)
      throw ValidationError("Distribution: masses do not sum to one");
    cumulative_.resize(points_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      acc += points_[i].prob;
      cumulative_[i] = acc;
    }
  }

  std::span<const DistPoint> points() const { return points_; }
  /// cumulative()[k] = P[X <= x_k]
  std::span<const double> cumulative() const { return cumulative_; }
  std::size_t size() const { return points_.size(); }
  double min() const { return points_.front().outcome; }
  double max() const { return points_.back().outcome; }

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<DistPoint> points_;
  std::vector<double> cumulative_;
};

/// Sorted law of X with exactly equal outcomes merged.
inline Distribution distribution_of(const FiniteProbSpace& space, const Position& x) {
  require_same_size(space, x.size(), "distribution_of");
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<DistPoint> points;
  for (std::size_t idx : order) {
    if (!points.empty() && points.back().outcome == x[idx])
      points.back().prob += space.prob(idx);
    else
      points.push_back({x[idx], space.prob(idx)});
  }
  return Distribution(std::move(points));
}

/// F_X(t) = P[X <= t], right-continuous.
inline double cdf(const Distribution& d, double t) {
  const auto pts = d.points();
  const auto it = std::upper_bound(pts.begin(), pts.end(), t,
                                   [](double v, const DistPoint& p) { return v < p.outcome; });
  if (it == pts.begin()) return 0.0;
  if (it == pts.end()) return 1.0;
  return d.cumulative()[static_cast<std::size_t>(it - pts.begin()) - 1];
}

/// q+_alpha = inf{t | P[X <= t] > alpha}. At alpha = 1 the set is empty and
/// the maximum outcome is returned.
inline double upper_quantile(const Distribution& d, double alpha) {
  detail::check_level(alpha, "upper_quantile");
  const auto cum = d.cumulative();
  for (std::size_t k = 0; k < cum.size(); ++k)
    if (cum[k] > alpha) return d.points()[k].outcome;
  return d.max();
}

/// q-_alpha = inf{t | P[X <= t] >= alpha}.
inline double lower_quantile(const Distribution& d, double alpha) {
  detail::check_level(alpha, "lower_quantile");
  const auto cum = d.cumulative();
  for (std::size_t k = 0; k < cum.size(); ++k)
    if (cum[k] >= alpha) return d.points()[k].outcome;
  // cumulative mass can round to just under 1
  return d.max();
}

/// E[X], or E[XY] when weights are supplied.
inline double expectation(const FiniteProbSpace& space, const Position& x) {
  require_same_size(space, x.size(), "expectation");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += space.prob(i) * x[i];
  return acc;
}

inline double expectation(const FiniteProbSpace& space, const Position& x,
                          std::span<const double> weights) {
  require_same_size(space, x.size(), "expectation");
  require_same_size(space, weights.size(), "expectation");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += space.prob(i) * x[i] * weights[i];
  return acc;
}

}  // namespace mrisk
