#pragma once

// One-dimensional searches along the cash line, shared by the acceptance-set
// reconstruction, the shortfall solver and the cash-additive envelope.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "mrisk/errors.hpp"
#include "mrisk/extended_real.hpp"

namespace mrisk {

struct BracketPolicy {
  double initial_width = 1.0;  // doubles on every expansion step
  double cap = 1e12;           // |s| beyond this is treated as divergence
  double tol = 1e-10;          // final bracket width
};

/// Bracket [lo, hi] around the switch point of a monotone predicate:
/// pred(lo) is false, pred(hi) is true.
struct Threshold {
  double lo;
  double hi;
};

namespace detail {

inline double as_double(double v) { return v; }
inline double as_double(ExtendedReal v) { return v.as_double(); }

}  // namespace detail

/// inf{s | pred(s)} for a predicate that is false below some point and true
/// above it. Exponential expansion from `start`, then bisection.
template <class Pred>
Threshold find_threshold(Pred&& pred, double start, const BracketPolicy& policy = {}) {
  double lo = start;
  double hi = start;
  double step = policy.initial_width;
  if (pred(start)) {
    lo = start - step;
    while (pred(lo)) {
      hi = lo;
      step *= 2.0;
      lo = start - step;
      if (std::abs(lo) > policy.cap)
        throw UnboundedError("threshold search: predicate holds below -" +
                             std::to_string(policy.cap));
    }
  } else {
    hi = start + step;
    while (!pred(hi)) {
      lo = hi;
      step *= 2.0;
      hi = start + step;
      if (std::abs(hi) > policy.cap)
        throw UnboundedError("threshold search: predicate fails up to " +
                             std::to_string(policy.cap));
    }
  }
  while (hi - lo > policy.tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // out of floating-point resolution
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return {lo, hi};
}

struct Minimum {
  double arg;
  double value;
};

/// Minimizes a convex function of one variable: expand a bracket downhill
/// from `start`, then golden-section search. Infinite values are allowed away
/// from the minimizer but not at `start`.
template <class F>
Minimum minimize_convex(F&& f, double start, const BracketPolicy& policy = {}) {
  auto g = [&](double r) { return detail::as_double(f(r)); };
  const double w = policy.initial_width;
  double f0 = g(start);
  if (!std::isfinite(f0)) {
    // walk outwards until the function becomes finite
    double step = w;
    for (;;) {
      if (step > policy.cap)
        throw UnboundedError("minimize: objective infinite around start point");
      if (std::isfinite(g(start + step))) {
        start += step;
        break;
      }
      if (std::isfinite(g(start - step))) {
        start -= step;
        break;
      }
      step *= 2.0;
    }
    f0 = g(start);
  }

  double a;
  double c;
  const double fr = g(start + w);
  const double fl = g(start - w);
  if (fr < f0 || fl < f0) {
    const double dir = (fr < f0) ? 1.0 : -1.0;
    double prev = start;
    double mid = start + dir * w;
    double fmid = (dir > 0) ? fr : fl;
    double step = 2.0 * w;
    double next = start + dir * step;
    double fnext = g(next);
    while (fnext < fmid) {
      prev = mid;
      mid = next;
      fmid = fnext;
      step *= 2.0;
      next = start + dir * step;
      if (std::abs(next) > policy.cap)
        throw UnboundedError("minimize: objective decreasing beyond bracket cap " +
                             std::to_string(policy.cap));
      fnext = g(next);
    }
    a = std::min(prev, next);
    c = std::max(prev, next);
  } else {
    a = start - w;
    c = start + w;
  }

  constexpr double inv_phi = 0.6180339887498949;
  double x1 = c - inv_phi * (c - a);
  double x2 = a + inv_phi * (c - a);
  double f1 = g(x1);
  double f2 = g(x2);
  Minimum best = (f1 <= f2) ? Minimum{x1, f1} : Minimum{x2, f2};
  if (f0 < best.value) best = {start, f0};
  while (c - a > policy.tol) {
    if (f1 <= f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - inv_phi * (c - a);
      if (x1 <= a || x1 >= x2) break;
      f1 = g(x1);
      if (f1 < best.value) best = {x1, f1};
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (c - a);
      if (x2 >= c || x2 <= x1) break;
      f2 = g(x2);
      if (f2 < best.value) best = {x2, f2};
    }
  }
  return best;
}

/// Grid scan over [start - radius, start + radius] followed by golden-section
/// refinement of the best cell. For objectives that are not known to be convex.
template <class F>
Minimum minimize_scan(F&& f, double start, double radius, std::size_t cells,
                      const BracketPolicy& policy = {}) {
  auto g = [&](double r) { return detail::as_double(f(r)); };
  if (cells < 2) cells = 2;
  const double lo = start - radius;
  const double h = 2.0 * radius / static_cast<double>(cells);
  std::size_t best_i = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= cells; ++i) {
    const double v = g(lo + h * static_cast<double>(i));
    if (v < best_v) {
      best_v = v;
      best_i = i;
    }
  }
  if (!std::isfinite(best_v)) throw UnboundedError("scan: objective infinite on grid");
  if (best_i == 0 || best_i == cells)
    throw UnboundedError("scan: minimum on the edge of the scan window");
  BracketPolicy local = policy;
  local.initial_width = h;
  local.cap = std::numeric_limits<double>::infinity();
  // the local refinement assumes unimodality inside the two neighbouring cells
  auto clipped = [&](double r) {
    const double left = lo + h * static_cast<double>(best_i - 1);
    const double right = lo + h * static_cast<double>(best_i + 1);
    if (r < left || r > right) return std::numeric_limits<double>::infinity();
    return g(r);
  };
  Minimum refined = minimize_convex(clipped, lo + h * static_cast<double>(best_i), local);
  if (best_v < refined.value) return {lo + h * static_cast<double>(best_i), best_v};
  return refined;
}

}  // namespace mrisk
