#pragma once

// Scenario tables (CSV / JSON) and declarative report configurations.
//
// CSV:    header row, a mandatory `prob` column, one column per position.
// JSON:   {"probs": [...], "positions": {"A": [...], ...}}
// Config: {"measures": [{"name": ..., "kind": ..., <params>}], "alpha_grid": [...],
//          "tolerance": 1e-9, "seed": 42}

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mrisk/axioms.hpp"
#include "mrisk/construct.hpp"
#include "mrisk/errors.hpp"
#include "mrisk/risk_measure.hpp"
#include "mrisk/space.hpp"

namespace mrisk {

/// Malformed or inconsistent input files.
struct InputError : Error {
  using Error::Error;
};

/// Probabilities within this distance of one are renormalized; further off is an error.
inline constexpr double kIngestProbTol = 1e-9;

struct ScenarioTable {
  FiniteProbSpace space;
  std::vector<std::string> names;
  std::vector<Position> positions;

  const Position* find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return &positions[i];
    return nullptr;
  }
};

enum class InputFormat { csv, json };

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

inline FiniteProbSpace checked_space(std::vector<double> probs) {
  if (probs.empty()) throw InputError("no scenario rows");
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (!(probs[i] > 0.0))
      throw InputError("probability in row " + std::to_string(i + 1) + " is not positive");
  const double total = stable_sum(probs);
  if (std::abs(total - 1.0) > kIngestProbTol) {
    std::ostringstream os;
    os.precision(17);
    os << "probabilities sum to " << total << ", more than " << kIngestProbTol << " away from 1";
    throw InputError(os.str());
  }
  for (double& p : probs) p /= total;
  try {
    return FiniteProbSpace(std::move(probs));
  } catch (const ValidationError& e) {
    throw InputError(e.what());
  }
}

inline ScenarioTable build_table(std::vector<double> probs, std::vector<std::string> names,
                                 std::vector<std::vector<double>> columns) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw InputError("empty position name");
    if (!seen.insert(n).second) throw InputError("duplicate position name '" + n + "'");
  }
  FiniteProbSpace space = checked_space(std::move(probs));
  std::vector<Position> positions;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != space.size())
      throw InputError("position '" + names[j] + "' has " + std::to_string(columns[j].size()) +
                       " outcomes, expected " + std::to_string(space.size()));
    positions.emplace_back(std::move(columns[j]));
  }
  return {std::move(space), std::move(names), std::move(positions)};
}

}  // namespace detail

inline ScenarioTable parse_scenarios_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto& l : detail::split(text, '\n'))
    if (!l.empty()) lines.push_back(l);
  if (lines.empty()) throw InputError("csv: empty input");
  if (lines.front().substr(0, 3) == "\xEF\xBB\xBF") lines.front().remove_prefix(3);

  const auto header = detail::split(lines.front(), ',');
  std::optional<std::size_t> prob_col;
  std::vector<std::string> names;
  std::vector<std::size_t> name_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "prob") {
      if (prob_col) throw InputError("csv: duplicate 'prob' column");
      prob_col = c;
    } else {
      names.emplace_back(header[c]);
      name_cols.push_back(c);
    }
  }
  if (!prob_col) throw InputError("csv: missing 'prob' column");

  std::vector<double> probs;
  std::vector<std::vector<double>> columns(names.size());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = detail::split(lines[r], ',');
    if (cells.size() != header.size())
      throw InputError("csv: row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(header.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = detail::parse_number(cells[c]);
      if (!v)
        throw InputError("csv: non-numeric cell '" + std::string(cells[c]) + "' at row " +
                         std::to_string(r) + ", column '" + std::string(header[c]) + "'");
      if (c == *prob_col) {
        probs.push_back(*v);
      } else {
        const auto j = static_cast<std::size_t>(
            std::find(name_cols.begin(), name_cols.end(), c) - name_cols.begin());
        columns[j].push_back(*v);
      }
    }
  }
  return detail::build_table(std::move(probs), std::move(names), std::move(columns));
}

inline ScenarioTable parse_scenarios_json(std::string_view text) {
  using nlohmann::ordered_json;
  // nlohmann keeps the last of duplicate keys; catch duplicates while parsing.
  std::vector<std::string> position_keys;
  std::string top_key;
  auto callback = [&](int depth, ordered_json::parse_event_t event, ordered_json& parsed) {
    if (event == ordered_json::parse_event_t::key) {
      if (depth == 1) top_key = parsed.get<std::string>();
      if (depth == 2 && top_key == "positions") position_keys.push_back(parsed.get<std::string>());
    }
    return true;
  };
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end(), callback);
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("probs") || !doc.contains("positions"))
    throw InputError("json: expected an object with 'probs' and 'positions'");
  const auto& jp = doc["probs"];
  const auto& jpos = doc["positions"];
  if (!jp.is_array() || !jpos.is_object())
    throw InputError("json: 'probs' must be an array and 'positions' an object");

  auto numbers = [](const ordered_json& arr, const std::string& what) {
    if (!arr.is_array()) throw InputError("json: '" + what + "' is not an array");
    std::vector<double> out;
    for (const auto& v : arr) {
      if (!v.is_number() || !std::isfinite(v.get<double>()))
        throw InputError("json: non-numeric entry in '" + what + "'");
      out.push_back(v.get<double>());
    }
    return out;
  };
  std::vector<double> probs = numbers(jp, "probs");
  std::set<std::string> unique(position_keys.begin(), position_keys.end());
  if (unique.size() != position_keys.size()) throw InputError("json: duplicate position name");
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (const auto& [name, values] : jpos.items()) {
    names.push_back(name);
    columns.push_back(numbers(values, name));
  }
  return detail::build_table(std::move(probs), std::move(names), std::move(columns));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline InputFormat format_of(const std::filesystem::path& path) {
  return path.extension() == ".json" ? InputFormat::json : InputFormat::csv;
}

inline ScenarioTable ingest(const std::filesystem::path& path, InputFormat format) {
  const std::string text = read_file(path);
  return format == InputFormat::json ? parse_scenarios_json(text) : parse_scenarios_csv(text);
}

inline ScenarioTable ingest(const std::filesystem::path& path) {
  return ingest(path, format_of(path));
}

// ---------------------------------------------------------------------------
// Report configuration

struct NamedMeasure {
  std::string name;
  RiskMeasureSpec spec;
  AxiomProfile expected;  // default profile, with any "expect" overrides applied
};

struct ReportConfig {
  std::vector<NamedMeasure> measures;
  std::vector<double> alpha_grid;
  double tolerance = kRiskTol;
  std::uint64_t seed = 42;
};

namespace detail {

using nlohmann::ordered_json;

inline double number_field(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing '" + key + "'");
  if (!j[key].is_number()) throw InputError(where + ": '" + key + "' must be a number");
  return j[key].get<double>();
}

inline std::vector<double> number_list(const ordered_json& j, const char* key,
                                       const std::string& where) {
  if (!j.contains(key) || !j[key].is_array())
    throw InputError(where + ": '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw InputError(where + ": '" + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline void allow_only(const ordered_json& j, std::initializer_list<std::string_view> keys,
                       const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (auto allowed : keys) ok = ok || (k == allowed);
    if (!ok) throw InputError(where + ": unknown field '" + k + "'");
  }
}

/// Catalogue: linear, exponential(beta), hinge(alpha), power(p).
inline LossFunction parse_loss(const ordered_json& j, LossDirection dir, const std::string& where) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw InputError(where + ": 'loss' must be an object with a 'type'");
  const std::string type = j["type"].get<std::string>();
  if (type == "linear") {
    allow_only(j, {"type"}, where + ".loss");
    return loss::linear(dir);
  }
  if (type == "exponential") {
    allow_only(j, {"type", "beta"}, where + ".loss");
    return loss::exponential(number_field(j, "beta", where + ".loss"), dir);
  }
  if (type == "hinge") {
    allow_only(j, {"type", "alpha"}, where + ".loss");
    return loss::hinge(number_field(j, "alpha", where + ".loss"), dir);
  }
  if (type == "power") {
    allow_only(j, {"type", "p"}, where + ".loss");
    return loss::power(number_field(j, "p", where + ".loss"), dir);
  }
  throw InputError(where + ": unknown loss type '" + type + "'");
}

inline Expect parse_expect(const ordered_json& v, const std::string& where) {
  if (v.is_boolean()) return v.get<bool>() ? Expect::holds : Expect::fails;
  if (v.is_null()) return Expect::unchecked;
  throw InputError(where + ": expectations must be true, false or null");
}

inline NamedMeasure parse_measure(const ordered_json& j, std::size_t index) {
  const std::string where = "measures[" + std::to_string(index) + "]";
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw InputError(where + ": needs a string 'kind'");
  const std::string kind_str = j["kind"].get<std::string>();
  const auto kind = parse_kind(kind_str);
  if (!kind) throw InputError(where + ": unknown kind '" + kind_str + "'");

  auto build = [&]() -> RiskMeasureSpec {
    switch (*kind) {
      case MeasureKind::expected_loss:
        allow_only(j, {"name", "kind", "expect"}, where);
        return RiskMeasureSpec::expected_loss();
      case MeasureKind::worst_case:
        allow_only(j, {"name", "kind", "expect"}, where);
        return RiskMeasureSpec::worst_case();
      case MeasureKind::var:
        allow_only(j, {"name", "kind", "expect", "alpha"}, where);
        return RiskMeasureSpec::var(number_field(j, "alpha", where));
      case MeasureKind::avar:
        allow_only(j, {"name", "kind", "expect", "alpha"}, where);
        return RiskMeasureSpec::avar(number_field(j, "alpha", where));
      case MeasureKind::entropic:
        allow_only(j, {"name", "kind", "expect", "beta"}, where);
        return RiskMeasureSpec::entropic(number_field(j, "beta", where));
      case MeasureKind::spectral:
        allow_only(j, {"name", "kind", "expect", "breakpoints", "values"}, where);
        return RiskMeasureSpec::spectral(
            RiskSpectrum(number_list(j, "breakpoints", where), number_list(j, "values", where)));
      case MeasureKind::mixture:
        allow_only(j, {"name", "kind", "expect", "levels", "weights"}, where);
        return RiskMeasureSpec::mixture(
            MixtureMeasure(number_list(j, "levels", where), number_list(j, "weights", where)));
      case MeasureKind::shortfall:
        allow_only(j, {"name", "kind", "expect", "loss", "r0"}, where);
        if (!j.contains("loss")) throw InputError(where + ": missing 'loss'");
        return RiskMeasureSpec::shortfall(parse_loss(j["loss"], LossDirection::increasing, where),
                                          number_field(j, "r0", where));
      case MeasureKind::envelope:
        allow_only(j, {"name", "kind", "expect", "loss"}, where);
        if (!j.contains("loss")) throw InputError(where + ": missing 'loss'");
        return RiskMeasureSpec::envelope(parse_loss(j["loss"], LossDirection::nonincreasing, where));
    }
    throw InputError(where + ": unsupported kind");
  };

  RiskMeasureSpec spec = [&] {
    try {
      return build();
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(where + ": " + e.what());
    }
  }();

  std::string name = spec.describe();
  if (j.contains("name")) {
    if (!j["name"].is_string() || j["name"].get<std::string>().empty())
      throw InputError(where + ": 'name' must be a non-empty string");
    name = j["name"].get<std::string>();
  }

  AxiomProfile expected = default_profile(spec);
  if (j.contains("expect")) {
    const auto& e = j["expect"];
    if (!e.is_object()) throw InputError(where + ": 'expect' must be an object");
    for (const auto& [k, v] : e.items()) {
      const std::string w = where + ".expect." + k;
      if (k == "cash_additive") expected.cash_additive = parse_expect(v, w);
      else if (k == "monotone") expected.monotone = parse_expect(v, w);
      else if (k == "normalized") expected.normalized = parse_expect(v, w);
      else if (k == "positively_homogeneous") expected.positively_homogeneous = parse_expect(v, w);
      else if (k == "subadditive") expected.subadditive = parse_expect(v, w);
      else if (k == "convex") expected.convex = parse_expect(v, w);
      else throw InputError(w + ": unknown property");
    }
  }
  return {std::move(name), std::move(spec), expected};
}

}  // namespace detail

inline ReportConfig parse_config(std::string_view text) {
  using nlohmann::ordered_json;
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config: expected a JSON object");
  detail::allow_only(doc, {"measures", "alpha_grid", "tolerance", "seed"}, "config");

  ReportConfig cfg;
  if (doc.contains("measures")) {
    if (!doc["measures"].is_array()) throw InputError("config: 'measures' must be an array");
    std::set<std::string> names;
    std::size_t i = 0;
    for (const auto& m : doc["measures"]) {
      NamedMeasure nm = detail::parse_measure(m, i++);
      if (!names.insert(nm.name).second)
        throw InputError("config: duplicate measure name '" + nm.name + "'");
      cfg.measures.push_back(std::move(nm));
    }
  }
  if (doc.contains("alpha_grid")) {
    cfg.alpha_grid = detail::number_list(doc, "alpha_grid", "config");
    for (double a : cfg.alpha_grid)
      if (!(a > 0.0 && a <= 1.0)) throw InputError("config: alpha_grid entries must lie in (0,1]");
  }
  if (doc.contains("tolerance")) {
    cfg.tolerance = detail::number_field(doc, "tolerance", "config");
    if (!(cfg.tolerance >= 0.0)) throw InputError("config: tolerance must be >= 0");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw InputError("config: seed must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  return cfg;
}

inline ReportConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

}  // namespace mrisk
