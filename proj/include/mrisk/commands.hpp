#pragma once

// Subcommand bodies of the `risk` tool. Each writes to the given streams and
// returns the process exit code: 0 success, 1 check failure, 2 usage/input error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrisk/acceptance.hpp"
#include "mrisk/axioms.hpp"
#include "mrisk/dominance.hpp"
#include "mrisk/duality.hpp"
#include "mrisk/io.hpp"
#include "mrisk/measures.hpp"
#include "mrisk/risk_measure.hpp"

namespace mrisk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// 17 significant digits; negative zero prints as 0.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

struct ReportCell {
  std::optional<double> value;
  std::string error;
};

struct ReportTable {
  std::vector<std::string> measures;
  std::vector<std::string> positions;
  std::vector<std::vector<ReportCell>> rows;

  bool has_errors() const {
    for (const auto& row : rows)
      for (const auto& c : row)
        if (!c.value) return true;
    return false;
  }
};

/// Evaluates every measure on every position. A failing cell records its
/// error and the remaining cells are still computed.
inline ReportTable compute_report(const ScenarioTable& scenarios, const ReportConfig& config) {
  ReportTable t;
  for (const auto& m : config.measures) t.measures.push_back(m.name);
  t.positions = scenarios.names;
  for (const Position& x : scenarios.positions) {
    std::vector<ReportCell> row;
    for (const auto& m : config.measures) {
      ReportCell cell;
      try {
        cell.value = m.spec(scenarios.space, x);
      } catch (const Error& e) {
        cell.error = e.what();
      }
      row.push_back(std::move(cell));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

enum class ReportFormat { csv, json, text };

inline void render_csv(const ReportTable& t, std::ostream& out) {
  out << "position";
  for (const auto& m : t.measures) out << "," << m;
  out << "\n";
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    out << t.positions[i];
    for (const auto& c : t.rows[i]) out << "," << (c.value ? format_number(*c.value) : "ERROR");
    out << "\n";
  }
}

inline void render_json(const ReportTable& t, std::ostream& out) {
  out << "{\n  \"measures\": [";
  for (std::size_t j = 0; j < t.measures.size(); ++j)
    out << (j ? ", " : "") << json_string(t.measures[j]);
  out << "],\n  \"positions\": [";
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    out << (i ? "," : "") << "\n    {\"name\": " << json_string(t.positions[i]) << ", \"values\": [";
    bool any_error = false;
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
      const auto& c = t.rows[i][j];
      out << (j ? ", " : "") << (c.value ? format_number(*c.value) : "null");
      any_error = any_error || !c.value;
    }
    out << "]";
    if (any_error) {
      out << ", \"errors\": {";
      bool first = true;
      for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
        if (t.rows[i][j].value) continue;
        out << (first ? "" : ", ") << json_string(t.measures[j]) << ": "
            << json_string(t.rows[i][j].error);
        first = false;
      }
      out << "}";
    }
    out << "}";
  }
  out << (t.positions.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

inline void render_text(const ReportTable& t, std::ostream& out) {
  std::vector<std::vector<std::string>> grid;
  grid.push_back({"position"});
  for (const auto& m : t.measures) grid.back().push_back(m);
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    std::vector<std::string> line{t.positions[i]};
    for (const auto& c : t.rows[i]) {
      if (!c.value) {
        line.emplace_back("ERROR");
        continue;
      }
      std::ostringstream os;
      os << std::setprecision(10) << (*c.value == 0.0 ? 0.0 : *c.value);
      line.push_back(os.str());
    }
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(grid.front().size(), 0);
  for (const auto& line : grid)
    for (std::size_t j = 0; j < line.size(); ++j) width[j] = std::max(width[j], line[j].size());
  for (const auto& line : grid) {
    for (std::size_t j = 0; j < line.size(); ++j) {
      if (j == 0)
        out << std::left << std::setw(static_cast<int>(width[j])) << line[j];
      else
        out << "  " << std::right << std::setw(static_cast<int>(width[j])) << line[j];
    }
    out << "\n";
  }
  out << std::left;
}

inline int run_report(const ScenarioTable& scenarios, const ReportConfig& config,
                      ReportFormat format, std::ostream& out, std::ostream& err) {
  const ReportTable t = compute_report(scenarios, config);
  switch (format) {
    case ReportFormat::csv: render_csv(t, out); break;
    case ReportFormat::json: render_json(t, out); break;
    case ReportFormat::text: render_text(t, out); break;
  }
  if (t.has_errors()) {
    for (std::size_t i = 0; i < t.positions.size(); ++i)
      for (std::size_t j = 0; j < t.measures.size(); ++j)
        if (!t.rows[i][j].value)
          err << "error: " << t.positions[i] << " / " << t.measures[j] << ": "
              << t.rows[i][j].error << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

/// Default measure list for check-axioms when no config is supplied.
inline std::vector<NamedMeasure> default_axiom_measures() {
  std::vector<NamedMeasure> out;
  for (auto& [name, spec] : default_measure_catalogue()) {
    AxiomProfile p = default_profile(spec);
    out.push_back({name, std::move(spec), p});
  }
  return out;
}

struct AxiomRunOptions {
  std::uint64_t seed = 42;
  std::size_t trials = 10000;
  std::size_t acceptance_trials = 1000;
};

/// Measure-axiom and acceptance-axiom suites against each measure's expected
/// profile. Exit 0 iff every profile matches.
inline int run_check_axioms(const std::vector<NamedMeasure>& measures, const AxiomRunOptions& opts,
                            std::ostream& out) {
  out << "seed: " << opts.seed << "\n";
  out << "trials: " << opts.trials << " (acceptance: " << opts.acceptance_trials << ")\n";
  if (opts.trials == 0) {
    out << "warning: no trials requested, nothing checked\n";
    return kExitOk;
  }
  bool all_ok = true;
  const FiniteProbSpace acc_space = acceptance_check_space();
  for (std::size_t i = 0; i < measures.size(); ++i) {
    const auto& m = measures[i];
    const std::uint64_t seed = opts.seed + i;
    const MeasureAxiomReport r = check_measure_axioms(m.spec, opts.trials, seed, m.expected);
    out << "== " << m.name << "\n" << r.summary();
    bool ok = r.profile_matches();

    if (opts.acceptance_trials > 0) {
      const AcceptanceSet a = acceptance_of(acc_space, m.spec);
      const AcceptanceAxiomReport ar =
          check_acceptance_axioms(a, acc_space, opts.acceptance_trials, seed);
      const AcceptanceProfile ap = acceptance_profile(m.expected);
      const bool acc_ok = acceptance_report_matches(ar, ap);
      out << "  acceptance set [" << ar.trials << " trials, expected convex "
          << expect_name(ap.convex) << ", cone " << expect_name(ap.cone) << "]: "
          << (acc_ok ? "PASS" : "FAIL") << "\n";
      std::istringstream lines(ar.summary());
      for (std::string line; std::getline(lines, line);) out << "    " << line << "\n";
      ok = ok && acc_ok;
    }
    out << "  => " << (ok ? "profile matches" : "PROFILE MISMATCH") << "\n";
    all_ok = all_ok && ok;
  }
  out << (all_ok ? "all profiles match\n" : "profile mismatch\n");
  return all_ok ? kExitOk : kExitCheckFailed;
}

/// Primal value versus the dual value at the exact maximizer (plus a few
/// fixed candidates) for worst_case, avar and entropic measures.
inline int run_dual_check(const ScenarioTable& scenarios, const ReportConfig& config,
                          double tol, std::ostream& out) {
  std::vector<NamedMeasure> dual_measures;
  for (const auto& m : config.measures)
    if (m.spec.kind() == MeasureKind::worst_case || m.spec.kind() == MeasureKind::avar ||
        m.spec.kind() == MeasureKind::entropic)
      dual_measures.push_back(m);
    else
      out << "skipping " << m.name << ": no closed-form dual maximizer\n";
  if (dual_measures.empty()) {
    out << "no worst_case/avar/entropic measures in config; using defaults\n";
    for (auto spec : {RiskMeasureSpec::worst_case(), RiskMeasureSpec::avar(0.05),
                      RiskMeasureSpec::entropic(1.0)})
      dual_measures.push_back({spec.describe(), spec, default_profile(spec)});
  }

  const FiniteProbSpace& space = scenarios.space;
  std::vector<Density> candidates{Density::unit(space)};
  for (std::size_t k = 0; k < space.size(); ++k) candidates.push_back(Density::dirac(space, k));

  out << "tolerance: " << format_number(tol) << "\n";
  out << "position,measure,primal,dual,gap\n";
  bool ok = true;
  for (std::size_t i = 0; i < scenarios.names.size(); ++i) {
    const Position& x = scenarios.positions[i];
    for (const auto& m : dual_measures) {
      const auto rep = dual_of(space, m.spec);
      const double primal = m.spec(space, x);
      const double dual = dual_evaluate(space, x, *rep, candidates);
      const double gap = std::abs(primal - dual);
      const bool pass = gap <= tol;
      ok = ok && pass;
      out << scenarios.names[i] << "," << m.name << "," << format_number(primal) << ","
          << format_number(dual) << "," << format_number(gap) << (pass ? "" : ",FAIL") << "\n";
    }
  }
  out << (ok ? "all gaps within tolerance\n" : "gap exceeds tolerance\n");
  return ok ? kExitOk : kExitCheckFailed;
}

inline void print_verdict(std::ostream& out, const char* order, const std::string& a,
                          const std::string& b, const DominanceVerdict& v) {
  out << order << " " << a << " <= " << b << ": " << (v.dominated ? "true" : "false");
  if (v.witness) out << " (witness alpha=" << format_number(*v.witness) << ")";
  out << "\n";
}

inline int run_dominance(const ScenarioTable& scenarios, const std::string& xname,
                         const std::string& yname, const std::vector<double>& alpha_grid,
                         std::ostream& out, std::ostream& err) {
  const Position* x = scenarios.find(xname);
  const Position* y = scenarios.find(yname);
  if (!x || !y) {
    err << "error: unknown position '" << (!x ? xname : yname) << "'\n";
    return kExitUsage;
  }
  const Distribution dx = distribution_of(scenarios.space, *x);
  const Distribution dy = distribution_of(scenarios.space, *y);
  print_verdict(out, "FSD", xname, yname, fsd_dominated(dx, dy));
  print_verdict(out, "FSD", yname, xname, fsd_dominated(dy, dx));
  print_verdict(out, "SSD", xname, yname, ssd_dominated(dx, dy));
  print_verdict(out, "SSD", yname, xname, ssd_dominated(dy, dx));
  if (!alpha_grid.empty()) {
    out << "alpha,var_" << xname << ",var_" << yname << ",avar_" << xname << ",avar_" << yname
        << "\n";
    for (double a : alpha_grid)
      out << format_number(a) << "," << format_number(-upper_quantile(dx, a)) << ","
          << format_number(-upper_quantile(dy, a)) << "," << format_number(avar(dx, a)) << ","
          << format_number(avar(dy, a)) << "\n";
  }
  return kExitOk;
}

}  // namespace mrisk
