// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// A criterion passes only if its numeric condition holds within its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "besovlab/besovlab.hpp"

namespace {

using namespace besovlab;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

SampledPath ramp(int J) { return SampledPath::from_function(Grid(0, 1, J), [](double x) { return x; }); }

std::vector<double> alpha_grid_030_070() {
  std::vector<double> a;
  for (int i = 30; i <= 70; i += 5) a.push_back(i / 100.0);
  return a;
}

ExperimentConfig bm_sweep_config() {
  ExperimentConfig c;
  c.generator.process = Process::BrownianMotion;
  c.generator.grid = Grid(0, 1, 14);
  c.generator.seed = 20240601;
  c.p = 2;
  c.alpha_grid = alpha_grid_030_070();
  c.n_levels = 12;
  c.replicates = 100;
  c.workers = workers();
  return c;
}

Outcome ramp_level_terms() {
  const auto f = ramp(12);
  double worst = 0.0;
  for (double alpha : {0.25, 0.4, 0.6})
    for (double p : {2.0, 4.0})
      for (int n = 1; n <= 12; ++n) {
        const double expected = std::exp2(n * p * (alpha - 1));
        worst = std::max(worst, std::abs(level_term(f, n, alpha, p) / expected - 1.0));
      }
  return {worst < 1e-12, fmt("max relative error %.3g (< 1e-12)", worst)};
}

Outcome bm_level_term_mean() {
  const Grid g(0, 1, 14);
  const int replicates = 200;
  double sum = 0.0;
  for (int r = 0; r < replicates; ++r) sum += level_term(path_of(generate_bm(g, stream_seed(11, r))), 8, 0.4, 2);
  const double mean = sum / replicates;
  const double target = std::exp2(-1.6);
  const double rel = std::abs(mean / target - 1.0);
  return {rel <= 0.10, fmt("mean T_8 = %.5f vs %.5f, relative deviation %.3f (<= 0.10)", mean, target, rel)};
}

Outcome bm_phase_transition() {
  const auto report = run_alpha_sweep(bm_sweep_config());
  bool ok = true;
  double worst_low = 1.0, worst_high = 1.0;
  for (const auto& row : report.rows) {
    if (row.alpha <= 0.45 + 1e-12) worst_low = std::min(worst_low, row.frac_converges);
    if (row.alpha >= 0.55 - 1e-12) worst_high = std::min(worst_high, row.frac_diverges);
  }
  ok = worst_low >= 0.95 && worst_high >= 0.95;
  const bool crit = report.critical_alpha && *report.critical_alpha >= 0.45 && *report.critical_alpha <= 0.55;
  return {ok && crit, fmt("min Converges (alpha<=0.45) %.2f, min Diverges (alpha>=0.55) %.2f, critical alpha %s",
                          worst_low, worst_high,
                          report.critical_alpha ? fmt("%.4f", *report.critical_alpha).c_str() : "absent")};
}

Outcome fbm_guaranteed_regime() {
  ExperimentConfig c;
  c.generator.process = Process::WeightedFbmMeasure;
  c.generator.hurst = 0.75;
  c.generator.weight = WeightFunction::constant(1.0);
  c.generator.grid = Grid(0, 1, 14);
  c.generator.seed = 75;
  c.alpha_grid = {0.45};
  c.n_levels = 12;
  c.replicates = 100;
  c.workers = workers();
  const auto report = run_alpha_sweep(c);
  const double conv = report.rows[0].frac_converges;
  return {conv >= 0.95, fmt("Converges fraction %.2f (>= 0.95), median slope %.4f", conv, *report.rows[0].median_slope)};
}

Outcome ramp_besov_oracle() {
  std::ifstream in(BESOVLAB_FIXTURES "/ramp_besov_oracle.txt");
  double oracle = 0.0;
  if (!(in >> oracle)) return {false, "oracle fixture missing"};
  const auto r = besov_norm(ramp(12), BesovParams(0.3, 2, 2));
  const double rel = std::abs(r.seminorm_truncated / oracle - 1.0);
  return {rel <= 0.01, fmt("seminorm %.8f vs oracle %.8f, relative error %.2e (<= 0.01)", r.seminorm_truncated, oracle, rel)};
}

Outcome paley_zygmund_exhaustive() {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> length(1, 16);
  std::normal_distribution<double> normal;
  int held = 0;
  double lowest = 1.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> lambda(static_cast<std::size_t>(length(rng)));
    for (double& x : lambda) x = normal(rng);
    const auto result = paley_zygmund_check(lambda, PZMode::exact());
    held += result.pass;
    lowest = std::min(lowest, result.probability);
  }
  return {held == 1000, fmt("bound held in %d / 1000 instances, smallest probability %.4f", held, lowest)};
}

Outcome lemma_stabilization() {
  const Grid g(0, 1, 12);
  const auto weights = WeightSequence::geometric(0.4, 2, 12);
  const auto family = DisjointFamily::full_dyadic(12);
  const int replicates = 100;
  std::vector<double> change(replicates);
  parallel_for(replicates, workers(), [&](std::size_t r) {
    const auto s = lemma_statistic(generate_bm(g, stream_seed(707, r)), weights, family);
    change[r] = (s[11] - s[9]) / s[9];
  });
  int stable = 0;
  for (double c : change) stable += c < 0.05;
  const double frac = static_cast<double>(stable) / replicates;
  return {frac >= 0.95, fmt("relative change below 5%% in %.2f of replicates (>= 0.95); median change %.4f", frac,
                            empirical_quantile(change, 0.5))};
}

Outcome boundedness_probe_quantiles() {
  GeneratorSpec spec;
  spec.process = Process::BrownianMotion;
  spec.grid = Grid(0, 1, 12);
  spec.seed = 808;
  const auto rows = boundedness_probe(spec, {4, 16, 64, 256, 1024}, 500, 0.99, {.workers = workers()});
  double top = 0.0;
  for (const auto& row : rows) top = std::max(top, row.quantile);
  const double ratio = rows.back().quantile / rows[1].quantile;
  std::string all;
  for (const auto& row : rows) all += fmt(" %zu:%.3f", row.family_size, row.quantile);
  return {ratio <= 1.5 && top <= 3.0, fmt("quantiles%s; ratio 1024/16 = %.3f (<= 1.5), max %.3f (<= 3.0)", all.c_str(),
                                          ratio, top)};
}

Outcome cross_module_identity() {
  const double alpha = 0.4;
  const int N = 12;
  const auto weights = WeightSequence::geometric(alpha, 2, N);
  const auto family = DisjointFamily::full_dyadic(N);
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    const auto sample = generate_bm(Grid(0, 1, N), stream_seed(909, r));
    const auto lemma = lemma_statistic(sample, weights, family);
    const auto series = kamont_series(path_of(sample), N, alpha, 2);
    for (int n = 0; n < N; ++n) worst = std::max(worst, std::abs(lemma[n] / series.partial_sums[n] - 1.0));
  }
  return {worst <= 1e-12, fmt("max relative difference %.3g (<= 1e-12)", worst)};
}

Outcome parallel_determinism() {
  std::vector<std::string> dumps;
  for (unsigned w : {1u, 4u, 8u}) {
    auto c = bm_sweep_config();
    c.workers = w;
    const auto report = run_alpha_sweep(c);
    std::ostringstream csv;
    write_report_csv(csv, report);
    dumps.push_back(to_json(report, false).dump(2) + "\n" + csv.str());
  }
  const bool same = dumps[0] == dumps[1] && dumps[0] == dumps[2];
  return {same, fmt("reports at 1, 4, 8 workers %s (%zu bytes)", same ? "byte-identical" : "differ", dumps[0].size())};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "ramp level terms exact", 1, ramp_level_terms},
      {2, "BM level-term mean", 30, bm_level_term_mean},
      {3, "BM phase transition", 300, bm_phase_transition},
      {4, "fBm guaranteed regime", 300, fbm_guaranteed_regime},
      {5, "Besov norm oracle", 5, ramp_besov_oracle},
      {6, "Paley-Zygmund exhaustive", 60, paley_zygmund_exhaustive},
      {7, "lemma statistic stabilization", 120, lemma_stabilization},
      {8, "boundedness probe", 120, boundedness_probe_quantiles},
      {9, "cross-module identity", 10, cross_module_identity},
      {10, "determinism under parallelism", 600, parallel_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("criterion %2d %-32s %s  %s; %.2f s (budget %.0f s%s)\n", c.id, c.name, pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
