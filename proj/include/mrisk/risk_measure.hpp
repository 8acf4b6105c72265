#pragma once

// Uniform handle over every implemented risk measure, used wherever a
// measure is chosen at run time (acceptance sets, duality oracles, the CLI).

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>

#include "mrisk/construct.hpp"
#include "mrisk/errors.hpp"
#include "mrisk/measures.hpp"
#include "mrisk/space.hpp"

namespace mrisk {

enum class MeasureKind {
  expected_loss,
  var,
  avar,
  worst_case,
  entropic,
  spectral,
  shortfall,
  mixture,
  envelope,
};

inline constexpr std::array<MeasureKind, 9> kAllKinds = {
    MeasureKind::expected_loss, MeasureKind::var,       MeasureKind::avar,
    MeasureKind::worst_case,    MeasureKind::entropic,  MeasureKind::spectral,
    MeasureKind::shortfall,     MeasureKind::mixture,   MeasureKind::envelope,
};

inline std::string_view kind_name(MeasureKind k) {
  switch (k) {
    case MeasureKind::expected_loss: return "expected_loss";
    case MeasureKind::var: return "var";
    case MeasureKind::avar: return "avar";
    case MeasureKind::worst_case: return "worst_case";
    case MeasureKind::entropic: return "entropic";
    case MeasureKind::spectral: return "spectral";
    case MeasureKind::shortfall: return "shortfall";
    case MeasureKind::mixture: return "mixture";
    case MeasureKind::envelope: return "envelope";
  }
  return "?";
}

inline std::optional<MeasureKind> parse_kind(std::string_view s) {
  for (MeasureKind k : kAllKinds)
    if (kind_name(k) == s) return k;
  return std::nullopt;
}

/// A validated (kind, parameters) pair. Parameters are checked once, here.
class RiskMeasureSpec {
 public:
  struct ExpectedLoss {};
  struct WorstCase {};
  struct Var {
    double alpha;
  };
  struct Avar {
    double alpha;
  };
  struct Entropic {
    double beta;
  };
  struct Spectral {
    RiskSpectrum spectrum;
  };
  struct Shortfall {
    LossFunction loss;
    double r0;
  };
  struct Mixture {
    MixtureMeasure mixture;
  };
  /// Envelope of Z -> E[l(Z)] for a nonincreasing loss (an OCE).
  struct Envelope {
    LossFunction loss;
  };

  using Params =
      std::variant<ExpectedLoss, Var, Avar, WorstCase, Entropic, Spectral, Shortfall, Mixture,
                   Envelope>;

  static RiskMeasureSpec expected_loss() { return RiskMeasureSpec(ExpectedLoss{}); }
  static RiskMeasureSpec worst_case() { return RiskMeasureSpec(WorstCase{}); }
  static RiskMeasureSpec var(double alpha) {
    detail::check_level(alpha, "var");
    return RiskMeasureSpec(Var{alpha});
  }
  static RiskMeasureSpec avar(double alpha) {
    detail::check_level(alpha, "avar");
    return RiskMeasureSpec(Avar{alpha});
  }
  static RiskMeasureSpec entropic(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw DomainError("entropic: beta must be positive");
    return RiskMeasureSpec(Entropic{beta});
  }
  static RiskMeasureSpec spectral(RiskSpectrum phi) {
    return RiskMeasureSpec(Spectral{std::move(phi)});
  }
  static RiskMeasureSpec shortfall(LossFunction l, double r0) {
    if (l.direction() != LossDirection::increasing)
      throw ValidationError("shortfall: loss must be increasing");
    if (!std::isfinite(r0)) throw DomainError("shortfall: r0 must be finite");
    return RiskMeasureSpec(Shortfall{std::move(l), r0});
  }
  static RiskMeasureSpec mixture(MixtureMeasure m) { return RiskMeasureSpec(Mixture{std::move(m)}); }
  static RiskMeasureSpec envelope(LossFunction l) {
    if (l.direction() != LossDirection::nonincreasing)
      throw ValidationError("envelope: loss must be nonincreasing");
    return RiskMeasureSpec(Envelope{std::move(l)});
  }

  MeasureKind kind() const { return static_cast<MeasureKind>(params_.index()); }
  const Params& params() const { return params_; }

  double operator()(const FiniteProbSpace& space, const Position& x) const {
    return std::visit(
        [&](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ExpectedLoss>) return mrisk::expected_loss(space, x);
          else if constexpr (std::is_same_v<T, WorstCase>) return mrisk::worst_case(space, x);
          else if constexpr (std::is_same_v<T, Var>) return mrisk::var(space, x, p.alpha);
          else if constexpr (std::is_same_v<T, Avar>) return mrisk::avar(space, x, p.alpha);
          else if constexpr (std::is_same_v<T, Entropic>) return mrisk::entropic(space, x, p.beta);
          else if constexpr (std::is_same_v<T, Spectral>) return mrisk::spectral(space, x, p.spectrum);
          else if constexpr (std::is_same_v<T, Shortfall>)
            return mrisk::shortfall(space, x, p.loss, p.r0);
          else if constexpr (std::is_same_v<T, Mixture>)
            return mrisk::kusuoka_mixture(space, x, p.mixture);
          else return mrisk::oce(space, x, p.loss);
        },
        params_);
  }

  /// Short human-readable description, e.g. "avar(alpha=0.5)".
  std::string describe() const {
    std::ostringstream os;
    os << kind_name(kind());
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Var> || std::is_same_v<T, Avar>)
            os << "(alpha=" << p.alpha << ")";
          else if constexpr (std::is_same_v<T, Entropic>) os << "(beta=" << p.beta << ")";
          else if constexpr (std::is_same_v<T, Shortfall>)
            os << "(" << p.loss.name() << ", r0=" << p.r0 << ")";
          else if constexpr (std::is_same_v<T, Envelope>) os << "(" << p.loss.name() << ")";
        },
        params_);
    return os.str();
  }

 private:
  explicit RiskMeasureSpec(Params p) : params_(std::move(p)) {}
  Params params_;
};

static_assert(std::variant_size_v<RiskMeasureSpec::Params> == kAllKinds.size());

}  // namespace mrisk
