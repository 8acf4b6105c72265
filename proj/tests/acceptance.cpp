// End-to-end acceptance run: one PASS/FAIL line per criterion.
//   acceptance --risk <path to risk executable> --work <scratch dir>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrisk/axioms.hpp"
#include "mrisk/construct.hpp"
#include "mrisk/dominance.hpp"
#include "mrisk/duality.hpp"
#include "mrisk/sampling.hpp"
#include "oracles.hpp"

using namespace mrisk;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double budget_seconds;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

std::vector<double> raw(const Position& x) { return {x.begin(), x.end()}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << (v == 0.0 ? 0.0 : v);
  return os.str();
}

std::string risk_exe;
fs::path work_dir;

// AC1
Outcome axiom_suite() {
  std::size_t mismatches = 0;
  std::ostringstream os;
  os << "seed " << kSeed << ";";
  for (const auto& [name, rho] : default_measure_catalogue()) {
    const MeasureAxiomReport r = check_measure_axioms(rho, 10000, kSeed);
    if (!r.profile_matches()) {
      ++mismatches;
      os << "\n" << r.summary();
    }
  }
  os << " " << default_measure_catalogue().size() << " measures x 10^4 trials, " << mismatches
     << " profile mismatch(es)";
  return {mismatches == 0, os.str()};
}

// AC2
Outcome var_witness() {
  const auto w = search_var_subadditivity_violation(10000, kSeed, 10);
  if (!w) return {false, "no violation found in 10^4 trials"};
  nlohmann::ordered_json j;
  j["probs"] = w->probs;
  j["x"] = raw(w->x);
  j["y"] = raw(w->y);
  j["alpha"] = w->alpha;
  const fs::path path = work_dir / "var_witness.json";
  std::ofstream(path) << j.dump(2) << "\n";

  // reload the stored fixture and confirm it still violates subadditivity
  const auto back = nlohmann::json::parse(std::ifstream(path));
  const FiniteProbSpace s(back["probs"].get<std::vector<double>>());
  const Position x(back["x"].get<std::vector<double>>());
  const Position y(back["y"].get<std::vector<double>>());
  const double a = back["alpha"].get<double>();
  const double lhs = var(s, x + y, a);
  const double rhs = var(s, x, a) + var(s, y, a);
  return {lhs > rhs + kRiskTol, std::to_string(s.size()) + " atoms, alpha=" + fmt(a) +
                                    ": V@R(X+Y)=" + fmt(lhs) + " > " + fmt(rhs) + "; fixture " +
                                    path.string()};
}

// AC3
Outcome round_trip() {
  Rng rng(kSeed);
  double worst = 0.0;
  std::string where;
  for (const auto& [name, rho] : default_measure_catalogue()) {
    for (int t = 0; t < 1000; ++t) {
      const auto s = random_space(rng, 20);
      const Position x = random_position(rng, s.size(), PositionShape::any, uniform_real(rng, 0.5, 3));
      const double gap = std::abs(rho_from_acceptance(acceptance_of(s, rho), x) - rho(s, x));
      if (gap > worst) {
        worst = gap;
        where = name;
      }
    }
  }
  return {worst <= 1e-8, "max |rho_A(X) - rho(X)| = " + fmt(worst) + (where.empty() ? "" : " (" + where + ")") +
                             " over 10^3 instances per kind"};
}

// AC4
Outcome strong_duality() {
  Rng rng(kSeed + 4);
  double worst[3] = {0, 0, 0};
  for (int t = 0; t < 1000; ++t) {
    const FiniteProbSpace s = random_space(rng, 50, 50);
    const Position x = random_position(rng, 50);
    const double a = uniform_real(rng, 0.01, 1.0);
    const double beta = uniform_real(rng, 0.1, 5.0);
    std::vector<Density> diracs;
    for (std::size_t k = 0; k < 50; ++k) diracs.push_back(Density::dirac(s, k));
    DualRepresentation wc = dual_worst_case(s);
    wc.maximizer = nullptr;  // Dirac sweep only
    const std::vector<Density> unit{Density::unit(s)};
    worst[0] = std::max(worst[0], std::abs(dual_evaluate(s, x, wc, diracs) - worst_case(s, x)));
    worst[1] = std::max(worst[1], std::abs(dual_evaluate(s, x, dual_avar(s, a), unit) - avar(s, x, a)));
    worst[2] = std::max(worst[2],
                        std::abs(dual_evaluate(s, x, dual_entropic(s, beta), unit) - entropic(s, x, beta)));
  }
  return {worst[0] <= 1e-9 && worst[1] <= 1e-9 && worst[2] <= 1e-9,
          "max gaps: worst_case " + fmt(worst[0]) + ", avar " + fmt(worst[1]) + ", entropic " +
              fmt(worst[2])};
}

// AC5
Outcome conjugate_oracle() {
  Rng rng(kSeed + 5);
  double lo = INFINITY, hi = -INFINITY, min_infeasible = INFINITY;
  bool flags_ok = true;
  for (int t = 0; t < 6; ++t) {
    const FiniteProbSpace s = random_space(rng, 8, 3);
    const double a = uniform_real(rng, 0.2, 0.8);
    const auto rho = RiskMeasureSpec::avar(a);
    // feasible: mix P with the greedy tail density of a random position
    const Density tail = avar_maximizer(s, random_position(rng, s.size()), a);
    const double lam = uniform_real(rng, 0.0, 1.0);
    std::vector<double> y(s.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = lam * tail[i] + (1 - lam);
    const Density feasible(s, y);
    const ConjugateBound f = conjugate_lower_bound(s, rho, feasible, 100000, kSeed + t);
    lo = std::min(lo, f.value);
    hi = std::max(hi, f.value);
    flags_ok = flags_ok && !f.infeasible_direction;
    // infeasible: all mass on one atom whose probability is below alpha
    std::size_t k = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s.prob(i) < s.prob(k)) k = i;
    if (!(1.0 / s.prob(k) > 1.0 / a + 1e-12)) continue;
    const ConjugateBound g = conjugate_lower_bound(s, rho, Density::dirac(s, k), 100000, kSeed + t);
    min_infeasible = std::min(min_infeasible, g.value);
    flags_ok = flags_ok && g.infeasible_direction;
  }
  const bool pass = lo >= -1e-6 && hi <= 1e-6 && min_infeasible > 1e3 && flags_ok;
  return {pass, "feasible bounds in [" + fmt(lo) + ", " + fmt(hi) + "], smallest infeasible bound " +
                    fmt(min_infeasible) + (flags_ok ? "" : ", flag mismatch")};
}

// AC6
Outcome avar_integral() {
  Rng rng(kSeed + 6);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto s = random_space(rng, 20);
    const Position x = random_position(rng, s.size());
    const double a = uniform_real(rng, 1e-3, 1.0);
    worst = std::max(worst, std::abs(avar(s, x, a) - oracle::avar_by_integration(oracle::probs_of(s), raw(x), a)));
  }
  return {worst <= 1e-9, "max |avar - integral of V@R| = " + fmt(worst)};
}

// AC7
Outcome representations() {
  Rng rng(kSeed + 7);
  double gap[4] = {0, 0, 0, 0};
  for (int t = 0; t < 500; ++t) {
    const auto s = random_space(rng, 20);
    const Position x = random_position(rng, s.size());
    const std::size_t k = 1 + rng() % 4;
    std::vector<double> levels, weights;
    for (std::size_t i = 0; i < k; ++i) {
      levels.push_back(uniform_real(rng, 0.01, 1.0));
      weights.push_back(1.0 / static_cast<double>(k));
    }
    const MixtureMeasure m(levels, weights);
    gap[0] = std::max(gap[0], std::abs(spectral(s, x, spectrum_from_mixture(m)) - kusuoka_mixture(s, x, m)));
    const double a = uniform_real(rng, 0.01, 1.0);
    gap[1] = std::max(gap[1], std::abs(oce(s, x, loss::hinge(a, LossDirection::nonincreasing)) - avar(s, x, a)));
    const double beta = uniform_real(rng, 0.1, 5.0);
    gap[2] = std::max(gap[2], std::abs(oce(s, x, loss::exponential(beta, LossDirection::nonincreasing)) -
                                       entropic(s, x, beta)));
    gap[3] = std::max(gap[3], std::abs(shortfall(s, x, loss::exponential(beta, LossDirection::increasing), 1.0) -
                                       entropic(s, x, beta)));
  }
  return {gap[0] <= 1e-9 && gap[1] <= 1e-8 && gap[2] <= 1e-8 && gap[3] <= 1e-8,
          "max gaps: spectral/mixture " + fmt(gap[0]) + ", envelope(hinge)/avar " + fmt(gap[1]) +
              ", oce(exp)/entropic " + fmt(gap[2]) + ", shortfall(exp)/entropic " + fmt(gap[3])};
}

// AC8
Outcome dominance() {
  Rng rng(kSeed + 8);
  int ssd_dis = 0, fsd_dis = 0, grid_dis = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto sx = random_space(rng, 10, 10);
    const auto sy = random_space(rng, 10, 10);
    const auto shape = t % 2 ? PositionShape::lattice : PositionShape::any;
    const Position x = random_position(rng, 10, shape);
    const Position y = t % 3 == 0 ? x + uniform_real(rng, 0.0, 0.5) : random_position(rng, 10, shape);
    const Distribution dx = distribution_of(sx, x), dy = distribution_of(sy, y);
    const auto px = oracle::probs_of(sx), py = oracle::probs_of(sy);
    const bool ssd = ssd_dominated(dx, dy).dominated;
    const bool fsd = fsd_dominated(dx, dy).dominated;
    ssd_dis += ssd != oracle::ssd(px, raw(x), py, raw(y));
    fsd_dis += fsd != oracle::fsd(px, raw(x), py, raw(y));
    if (t < 100) {
      for (int k = 1; k <= 10000; ++k) {
        const double a = k / 10000.0;
        if (fsd && -upper_quantile(dx, a) < -upper_quantile(dy, a)) ++grid_dis;
        if (ssd && avar(dx, a) + 1e-12 < avar(dy, a)) ++grid_dis;
      }
    }
  }
  return {ssd_dis == 0 && fsd_dis == 0 && grid_dis == 0,
          std::to_string(ssd_dis) + " SSD / " + std::to_string(fsd_dis) +
              " FSD disagreements on 10^3 pairs; " + std::to_string(grid_dis) +
              " grid contradictions on 10^2 pairs x 10^4 levels"};
}

std::pair<int, std::string> run_capture(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// AC9
Outcome cli_determinism() {
  const std::string data = MRISK_TEST_DATA;
  const std::string cmd = risk_exe + " report " + data + "/scenarios.csv --config " + data +
                          "/config.json --format json";
  const auto [c1, out1] = run_capture(cmd);
  const auto [c2, out2] = run_capture(cmd);
  std::ifstream golden(data + "/report.json");
  std::stringstream g;
  g << golden.rdbuf();
  const bool same = out1 == out2;
  const bool matches = out1 == g.str();
  return {c1 == 0 && c2 == 0 && same && matches,
          std::string("exit codes ") + std::to_string(c1) + "/" + std::to_string(c2) + ", runs " +
              (same ? "identical" : "differ") + ", golden " + (matches ? "matches" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string work = "acceptance_out";
  app.add_option("--risk", risk_exe, "Path to the risk executable")->required();
  app.add_option("--work", work, "Directory for generated fixtures");
  CLI11_PARSE(app, argc, argv);
  work_dir = work;
  fs::create_directories(work_dir);

  const std::vector<Criterion> criteria{
      {"AC1", "axiom suite", 30, axiom_suite},
      {"AC2", "V@R incoherence witness", 10, var_witness},
      {"AC3", "acceptance-set round trip", 20, round_trip},
      {"AC4", "strong duality", 10, strong_duality},
      {"AC5", "conjugate oracle", 30, conjugate_oracle},
      {"AC6", "AV@R integral identity", 0, avar_integral},
      {"AC7", "representation equivalences", 0, representations},
      {"AC8", "dominance equivalence", 0, dominance},
      {"AC9", "CLI determinism", 0, cli_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_seconds == 0 || secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::cout << c.id << " " << (pass ? "PASS" : "FAIL") << "  " << c.title << " [" << fmt(secs) << " s"
              << (c.budget_seconds > 0 ? " / " + fmt(c.budget_seconds) + " s" : "") << "]: " << o.detail
              << (in_time ? "" : " (over time budget)") << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criterion(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
