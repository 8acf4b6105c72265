#pragma once

// Randomized verification of the risk-measure axioms (monotonicity,
// cash-additivity, normalization) and of the coherence/convexity properties,
// against an expected profile. A property expected to fail passes only when a
// counterexample is actually found.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mrisk/acceptance.hpp"
#include "mrisk/construct.hpp"
#include "mrisk/risk_measure.hpp"
#include "mrisk/sampling.hpp"
#include "mrisk/space.hpp"

namespace mrisk {

enum class Expect { holds, fails, unchecked };

inline std::string_view expect_name(Expect e) {
  switch (e) {
    case Expect::holds: return "holds";
    case Expect::fails: return "fails";
    case Expect::unchecked: return "unchecked";
  }
  return "?";
}

struct AxiomProfile {
  Expect cash_additive = Expect::holds;
  Expect monotone = Expect::holds;
  Expect normalized = Expect::holds;  // rho(0) = 0
  Expect positively_homogeneous = Expect::unchecked;
  Expect subadditive = Expect::unchecked;
  Expect convex = Expect::unchecked;
};

/// What is known to be true of each implemented measure.
inline AxiomProfile default_profile(const RiskMeasureSpec& rho) {
  AxiomProfile p;
  switch (rho.kind()) {
    case MeasureKind::expected_loss:
    case MeasureKind::avar:
    case MeasureKind::worst_case:
    case MeasureKind::spectral:
    case MeasureKind::mixture:
      p.positively_homogeneous = p.subadditive = p.convex = Expect::holds;
      break;
    case MeasureKind::var:
      p.positively_homogeneous = Expect::holds;
      p.subadditive = p.convex = Expect::fails;
      break;
    case MeasureKind::entropic:
      p.convex = Expect::holds;
      p.positively_homogeneous = Expect::fails;
      break;
    case MeasureKind::shortfall:
      if (std::get<RiskMeasureSpec::Shortfall>(rho.params()).loss.convex()) p.convex = Expect::holds;
      break;
    case MeasureKind::envelope:
      if (std::get<RiskMeasureSpec::Envelope>(rho.params()).loss.convex()) p.convex = Expect::holds;
      break;
  }
  // A constructed measure is normalized only for some losses. Its value at 0 is
  // law invariant, so a one-atom space decides it; otherwise rho(0) only has to
  // be finite, which the evaluation-error count covers.
  if (rho.kind() == MeasureKind::shortfall || rho.kind() == MeasureKind::envelope) {
    double at_zero = 0.0;
    try {
      at_zero = rho(FiniteProbSpace{1.0}, Position{0.0});
    } catch (const Error&) {
      return p;
    }
    if (std::abs(at_zero) > kRiskTol) p.normalized = Expect::unchecked;
  }
  return p;
}

struct CheckedProperty {
  std::string name;
  Expect expect = Expect::unchecked;
  Finding finding;

  bool passes() const {
    switch (expect) {
      case Expect::holds: return finding.holds();
      case Expect::fails: return !finding.holds();
      case Expect::unchecked: return true;
    }
    return false;
  }
};

struct MeasureAxiomReport {
  std::string measure;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t evaluation_errors = 0;
  std::optional<std::string> first_error;
  std::vector<CheckedProperty> properties;

  bool profile_matches() const {
    if (evaluation_errors > 0) return false;
    for (const auto& p : properties)
      if (!p.passes()) return false;
    return true;
  }

  const CheckedProperty& property(std::string_view name) const {
    for (const auto& p : properties)
      if (p.name == name) return p;
    throw DomainError("MeasureAxiomReport: no property " + std::string(name));
  }

  std::string summary() const {
    std::ostringstream os;
    os << measure << " [seed " << seed << ", " << trials << " trials]\n";
    for (const auto& p : properties) {
      if (p.expect == Expect::unchecked) continue;
      os << "  " << (p.passes() ? "PASS" : "FAIL") << " " << p.name << ": expected "
         << expect_name(p.expect) << ", " << p.finding.violations << " violation(s) in "
         << p.finding.checks << " checks\n";
      if (p.finding.first) os << "    counterexample: " << p.finding.first->detail << "\n";
    }
    if (evaluation_errors > 0)
      os << "  FAIL evaluation errors: " << evaluation_errors << " (first: " << *first_error
         << ")\n";
    return os.str();
  }
};

struct AxiomCheckOptions {
  std::size_t max_atoms = 20;
  double tol = 1e-9;
};

namespace detail {

inline std::string show_space(const FiniteProbSpace& s) {
  std::ostringstream os;
  os.precision(17);
  os << "P=(";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s.prob(i);
  os << ")";
  return os.str();
}

}  // namespace detail

/// Runs the property checks named in `profile` on `trials` random instances.
inline MeasureAxiomReport check_measure_axioms(const RiskMeasureSpec& rho, std::size_t trials,
                                               std::uint64_t seed, const AxiomProfile& profile,
                                               const AxiomCheckOptions& opts = {}) {
  MeasureAxiomReport report;
  report.measure = rho.describe();
  report.seed = seed;
  report.trials = trials;
  CheckedProperty cash{"cash_additive", profile.cash_additive, {}};
  CheckedProperty mono{"monotone", profile.monotone, {}};
  CheckedProperty norm{"normalized", profile.normalized, {}};
  CheckedProperty homo{"positively_homogeneous", profile.positively_homogeneous, {}};
  CheckedProperty sub{"subadditive", profile.subadditive, {}};
  CheckedProperty conv{"convex", profile.convex, {}};

  Rng rng(seed);
  const double tol = opts.tol;
  auto on = [](const CheckedProperty& p) { return p.expect != Expect::unchecked; };

  for (std::size_t t = 0; t < trials; ++t) {
    const FiniteProbSpace space = random_space(rng, opts.max_atoms);
    const std::size_t n = space.size();
    const double scale = uniform_real(rng, 0.5, 3.0);
    const Position x = random_position(rng, n, PositionShape::any, scale);
    const Position y = random_position(rng, n, PositionShape::any, scale);
    const double r = uniform_real(rng, -10.0, 10.0);
    const double lambda = uniform_real(rng, 0.0, 3.0);
    const double mu = uniform_real(rng, 0.0, 1.0);
    const Position up = x + random_nonnegative(rng, n, scale);
    const std::string where = detail::show_space(space) + " X=" + detail::show(x);

    try {
      const double rx = rho(space, x);
      if (on(cash)) {
        ++cash.finding.checks;
        const double shifted = rho(space, x + r);
        if (std::abs(shifted - (rx - r)) > tol) {
          std::ostringstream os;
          os.precision(17);
          os << where << " r=" << r << ": rho(X+r)=" << shifted << " vs rho(X)-r=" << rx - r;
          cash.finding.record({{x}, r, os.str()});
        }
      }
      if (on(mono)) {
        ++mono.finding.checks;
        const double ru = rho(space, up);
        if (ru > rx + tol) {
          std::ostringstream os;
          os.precision(17);
          os << where << " Y=" << detail::show(up) << " >= X: rho(Y)=" << ru << " > rho(X)=" << rx;
          mono.finding.record({{x, up}, 0.0, os.str()});
        }
      }
      if (on(norm)) {
        ++norm.finding.checks;
        const double r0 = rho(space, Position::constant(n, 0.0));
        if (std::abs(r0) > tol) {
          std::ostringstream os;
          os.precision(17);
          os << detail::show_space(space) << ": rho(0)=" << r0;
          norm.finding.record({{Position::constant(n, 0.0)}, 0.0, os.str()});
        }
      }
      if (on(homo)) {
        ++homo.finding.checks;
        const double rl = rho(space, lambda * x);
        if (std::abs(rl - lambda * rx) > tol * (1.0 + lambda)) {
          std::ostringstream os;
          os.precision(17);
          os << where << " lambda=" << lambda << ": rho(lambda X)=" << rl
             << " vs lambda rho(X)=" << lambda * rx;
          homo.finding.record({{x}, lambda, os.str()});
        }
      }
      if (on(sub) || on(conv)) {
        const double ry = rho(space, y);
        if (on(sub)) {
          ++sub.finding.checks;
          const double rs = rho(space, x + y);
          if (rs > rx + ry + tol) {
            std::ostringstream os;
            os.precision(17);
            os << where << " Y=" << detail::show(y) << ": rho(X+Y)=" << rs
               << " > rho(X)+rho(Y)=" << rx + ry;
            sub.finding.record({{x, y}, 0.0, os.str()});
          }
        }
        if (on(conv)) {
          ++conv.finding.checks;
          const double rm = rho(space, mix(mu, x, y));
          const double bound = mu * rx + (1.0 - mu) * ry;
          if (rm > bound + tol) {
            std::ostringstream os;
            os.precision(17);
            os << where << " Y=" << detail::show(y) << " mu=" << mu << ": rho(mix)=" << rm
               << " > " << bound;
            conv.finding.record({{x, y}, mu, os.str()});
          }
        }
      }
    } catch (const Error& e) {
      ++report.evaluation_errors;
      if (!report.first_error) report.first_error = where + ": " + e.what();
    }
  }
  report.properties = {cash, mono, norm, homo, sub, conv};
  return report;
}

inline MeasureAxiomReport check_measure_axioms(const RiskMeasureSpec& rho, std::size_t trials,
                                               std::uint64_t seed,
                                               const AxiomCheckOptions& opts = {}) {
  return check_measure_axioms(rho, trials, seed, default_profile(rho), opts);
}

/// A concrete failure of subadditivity for V@R.
struct VarWitness {
  std::vector<double> probs;
  Position x;
  Position y;
  double alpha;
};

/// Random search over small spaces, positions and levels for
/// V@R_alpha(X+Y) > V@R_alpha(X) + V@R_alpha(Y).
inline std::optional<VarWitness> search_var_subadditivity_violation(std::size_t trials,
                                                                    std::uint64_t seed,
                                                                    std::size_t max_atoms = 10) {
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const FiniteProbSpace space = random_space(rng, max_atoms, 2);
    const Position x = random_position(rng, space.size());
    const Position y = random_position(rng, space.size());
    const double alpha = uniform_real(rng, 0.01, 0.99);
    if (var(space, x + y, alpha) > var(space, x, alpha) + var(space, y, alpha) + kRiskTol)
      return VarWitness{{space.probs().begin(), space.probs().end()}, x, y, alpha};
  }
  return std::nullopt;
}

/// Built-in list of measures checked by default, one per kind.
inline std::vector<std::pair<std::string, RiskMeasureSpec>> default_measure_catalogue() {
  const MixtureMeasure m({0.1, 0.5, 1.0}, {0.5, 0.3, 0.2});
  return {
      {"expected_loss", RiskMeasureSpec::expected_loss()},
      {"var", RiskMeasureSpec::var(0.3)},
      {"avar", RiskMeasureSpec::avar(0.25)},
      {"worst_case", RiskMeasureSpec::worst_case()},
      {"entropic", RiskMeasureSpec::entropic(1.0)},
      {"spectral", RiskMeasureSpec::spectral(spectrum_from_mixture(m))},
      {"shortfall",
       RiskMeasureSpec::shortfall(loss::exponential(1.0, LossDirection::increasing), 1.0)},
      {"mixture", RiskMeasureSpec::mixture(m)},
      {"envelope", RiskMeasureSpec::envelope(loss::hinge(0.25, LossDirection::nonincreasing))},
  };
}

/// Space used for acceptance-set checks: unequal masses so that level-based
/// measures have non-trivial acceptance sets.
inline FiniteProbSpace acceptance_check_space() { return FiniteProbSpace{0.1, 0.2, 0.3, 0.4}; }

/// Acceptance-set properties expected from the measure's profile.
struct AcceptanceProfile {
  Expect convex = Expect::unchecked;
  Expect cone = Expect::unchecked;
};

inline AcceptanceProfile acceptance_profile(const AxiomProfile& p) {
  return {p.convex, p.positively_homogeneous};
}

inline bool acceptance_report_matches(const AcceptanceAxiomReport& r,
                                      const AcceptanceProfile& p) {
  auto ok = [](Expect e, const Finding& f) {
    return e == Expect::unchecked || (e == Expect::holds) == f.holds();
  };
  return r.nondegenerate.holds() && r.monotone.holds() && r.directionally_closed.holds() &&
         ok(p.convex, r.convex) && ok(p.cone, r.cone);
}

}  // namespace mrisk
