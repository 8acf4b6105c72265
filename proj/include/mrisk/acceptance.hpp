#pragma once

// Acceptance sets and the two directions of the correspondence
//   A_rho = {X | rho(X) <= 0},   rho_A(X) = inf{s | X + s*1 in A}.
// Sets are represented by a membership predicate; every query the
// correspondence needs is a membership query along a cash line.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mrisk/errors.hpp"
#include "mrisk/extended_real.hpp"
#include "mrisk/risk_measure.hpp"
#include "mrisk/sampling.hpp"
#include "mrisk/search.hpp"
#include "mrisk/space.hpp"

namespace mrisk {

/// Membership tolerance used by acceptance_of: X is accepted iff rho(X) <= tol.
inline constexpr double kMembershipTol = 1e-12;

class AcceptanceSet {
 public:
  using Predicate = std::function<bool(const Position&)>;

  explicit AcceptanceSet(Predicate contains, std::optional<RiskMeasureSpec> provenance = {})
      : contains_(std::move(contains)), provenance_(std::move(provenance)) {
    if (!contains_) throw ValidationError("AcceptanceSet: empty predicate");
  }

  bool contains(const Position& x) const { return contains_(x); }
  const std::optional<RiskMeasureSpec>& provenance() const { return provenance_; }

 private:
  Predicate contains_;
  std::optional<RiskMeasureSpec> provenance_;
};

/// A_rho on the given space.
inline AcceptanceSet acceptance_of(const FiniteProbSpace& space, const RiskMeasureSpec& rho,
                                   double tol = kMembershipTol) {
  return AcceptanceSet(
      [space, rho, tol](const Position& x) { return rho(space, x) <= tol; }, rho);
}

/// rho_A(X): the least cash that makes X acceptable. The returned amount is
/// the upper end of the final bisection bracket, so X + rho_A(X)*1 is in A.
inline double rho_from_acceptance(const AcceptanceSet& a, const Position& x,
                                  const BracketPolicy& policy = {}) {
  if (x.size() == 0) throw DimensionError("rho_from_acceptance: empty position");
  const double mean =
      std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  try {
    return find_threshold([&](double s) { return a.contains(x + s); }, -mean, policy).hi;
  } catch (const UnboundedError& e) {
    throw UnboundedError(std::string("rho_from_acceptance: unbounded (A misses the cash line "
                                     "or accepts all cash shifts): ") +
                         e.what());
  }
}

/// -r on constants r*1, +inf on every non-constant position.
inline ExtendedReal tau(const Position& x) {
  if (x.size() == 0 || !x.is_constant()) return ExtendedReal::infinity();
  return -x[0];
}

struct Counterexample {
  std::vector<Position> positions;
  double parameter = 0.0;  // scaling factor, mixing weight or cash amount
  std::string detail;
};

struct Finding {
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::optional<Counterexample> first;

  bool holds() const { return violations == 0; }
  void record(Counterexample c) {
    ++violations;
    if (!first) first = std::move(c);
  }
};

struct AcceptanceAxiomReport {
  std::size_t trials = 0;
  Finding nondegenerate;  // some cash accepted, some cash rejected
  Finding monotone;
  Finding convex;
  Finding cone;
  Finding directionally_closed;

  std::string summary() const {
    std::ostringstream os;
    auto line = [&](const char* name, const Finding& f) {
      os << name << ": " << (f.holds() ? "no violation found" : "VIOLATED") << " (" << f.violations
         << "/" << f.checks << ")\n";
      if (f.first) os << "  counterexample: " << f.first->detail << "\n";
    };
    line("nondegenerate", nondegenerate);
    line("monotone", monotone);
    line("convex", convex);
    line("cone", cone);
    line("directionally_closed", directionally_closed);
    return os.str();
  }
};

struct AcceptanceCheckOptions {
  double slack = 1e-9;  // cash added before re-testing membership
  BracketPolicy bracket{};
};

namespace detail {

inline std::string show(const Position& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace detail

/// Randomized spot checks of the acceptance-set axioms and of the convexity
/// and cone properties. Absence of a counterexample is not a proof.
inline AcceptanceAxiomReport check_acceptance_axioms(const AcceptanceSet& a,
                                                     const FiniteProbSpace& space,
                                                     std::size_t sample_budget,
                                                     std::uint64_t seed,
                                                     const AcceptanceCheckOptions& opts = {}) {
  AcceptanceAxiomReport report;
  report.trials = sample_budget;
  Rng rng(seed);
  const std::size_t n = space.size();

  // Nondegeneracy along the cash line through 0.
  {
    report.nondegenerate.checks = 1;
    bool some_accepted = false;
    bool some_rejected = false;
    for (int k = 0; k <= 40 && !(some_accepted && some_rejected); ++k) {
      const double c = std::ldexp(1.0, k);
      if (a.contains(Position::constant(n, c))) some_accepted = true;
      if (!a.contains(Position::constant(n, -c))) some_rejected = true;
    }
    if (!some_accepted || !some_rejected)
      report.nondegenerate.record({{Position::constant(n, 0.0)}, 0.0,
                                   some_accepted ? "every cash amount accepted"
                                                 : "no cash amount accepted"});
  }
  if (!report.nondegenerate.holds()) return report;

  auto boundary = [&](const Position& x) -> std::optional<Position> {
    try {
      return x + rho_from_acceptance(a, x, opts.bracket);
    } catch (const UnboundedError&) {
      return std::nullopt;
    }
  };

  for (std::size_t t = 0; t < sample_budget; ++t) {
    const Position x0 = random_position(rng, n);
    const Position y0 = random_position(rng, n);
    const auto xb = boundary(x0);
    const auto yb = boundary(y0);
    if (!xb || !yb) {
      report.nondegenerate.record({{x0}, 0.0, "cash line through " + detail::show(x0) +
                                                  " is unbounded"});
      continue;
    }

    ++report.monotone.checks;
    const Position up = *xb + random_nonnegative(rng, n);
    if (!a.contains(up + opts.slack))
      report.monotone.record({{*xb, up}, 0.0,
                              "X=" + detail::show(*xb) + " accepted, Y=" + detail::show(up) +
                                  " >= X rejected"});

    ++report.convex.checks;
    const double lambda = uniform_real(rng, 0.0, 1.0);
    const Position mid = mix(lambda, *xb, *yb);
    if (!a.contains(mid + opts.slack))
      report.convex.record({{*xb, *yb}, lambda,
                            "X=" + detail::show(*xb) + ", Y=" + detail::show(*yb) +
                                " accepted, mixture with lambda=" + std::to_string(lambda) +
                                " rejected"});

    ++report.cone.checks;
    const double scale = uniform_real(rng, 0.0, 4.0);
    if (!a.contains(scale * *xb + opts.slack))
      report.cone.record({{*xb}, scale,
                          "X=" + detail::show(*xb) + " accepted, " + std::to_string(scale) +
                              "*X rejected"});

    // X + r_n*1 accepted for r_n -> 0 must leave X accepted, up to slack.
    ++report.directionally_closed.checks;
    bool sequence_accepted = true;
    for (int k = 1; k <= 30 && sequence_accepted; ++k)
      sequence_accepted = a.contains(*xb + std::ldexp(1.0, -k));
    if (sequence_accepted && !a.contains(*xb + opts.slack))
      report.directionally_closed.record(
          {{*xb}, 0.0, "X + r_n accepted for r_n -> 0 but X=" + detail::show(*xb) + " rejected"});
  }
  return report;
}

}  // namespace mrisk
