#pragma once

// Monte Carlo experiments: alpha sweeps that locate the convergence/divergence
// transition of the dyadic series, and Besov-norm profiles across replicates.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "besovlab/besov.hpp"
#include "besovlab/dyadic_criterion.hpp"
#include "besovlab/error.hpp"
#include "besovlab/generators.hpp"
#include "besovlab/lemma.hpp"
#include "besovlab/parallel.hpp"
#include "besovlab/version.hpp"

namespace besovlab {

struct ExperimentConfig {
  GeneratorSpec generator;
  double p = 2.0;
  std::vector<double> alpha_grid;
  int n_levels = 12;
  std::size_t replicates = 1;
  unsigned workers = 1;

  void validate() const {
    generator.validate();
    if (alpha_grid.empty()) throw ConfigurationError("alpha_grid must not be empty");
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
      if (!(alpha_grid[i] > 0.0 && alpha_grid[i] < 1.0))
        throw ConfigurationError("alpha_grid entries must lie in (0, 1)");
      if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))
        throw ConfigurationError("alpha_grid must be strictly increasing");
    }
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigurationError("p must satisfy 1 <= p < inf");
    if (replicates < 1) throw ConfigurationError("replicates must be at least 1");
    if (n_levels < kMinSeriesLevels) throw ConfigurationError("n_levels must be at least 6");
    if (n_levels > generator.grid.J()) throw ConfigurationError("n_levels exceeds grid resolution J");
  }
};

/// Produces the path of one replicate from its derived seed.
using PathSource = std::function<SampledPath(std::uint64_t)>;

inline PathSource generator_source(const GeneratorSpec& spec) {
  return [spec](std::uint64_t seed) { return path_of(generate(spec, seed)); };
}

struct SweepRow {
  double alpha = 0.0;
  std::optional<double> median_slope;
  double frac_converges = 0.0;
  double frac_diverges = 0.0;
  double frac_inconclusive = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SweepRow> rows;
  std::optional<double> critical_alpha;
  double wall_time_seconds = 0.0;
  std::string version = kVersion;
};

inline std::optional<double> median(std::vector<double> x) {
  if (x.empty()) return std::nullopt;
  return empirical_quantile(std::move(x), 0.5);
}

/// First zero crossing of y(x), linearly interpolated.
inline std::optional<double> zero_crossing(const std::vector<double>& x, const std::vector<std::optional<double>>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!y[i]) continue;
    if (*y[i] == 0.0) return x[i];
    if (i + 1 < x.size() && y[i + 1] && (*y[i] < 0.0) != (*y[i + 1] < 0.0) && *y[i + 1] != 0.0)
      return x[i] + (0.0 - *y[i]) * (x[i + 1] - x[i]) / (*y[i + 1] - *y[i]);
  }
  return std::nullopt;
}

namespace detail {

template <class Body>
void run_replicates(std::size_t replicates, unsigned workers, Body&& body) {
  try {
    parallel_for(replicates, workers, std::forward<Body>(body));
  } catch (const std::bad_alloc&) {
    throw NumericError("resource exhaustion during replicate execution; no report produced");
  }
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Sweeps alpha over the config grid. Replicate r draws its path from
/// stream_seed(master seed, r); aggregation runs in replicate order, so the
/// report does not depend on the worker count.
inline ExperimentReport run_alpha_sweep(const ExperimentConfig& config, const PathSource& source) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t R = config.replicates;
  const std::size_t A = config.alpha_grid.size();
  std::vector<std::vector<std::optional<double>>> slopes(R, std::vector<std::optional<double>>(A));
  std::vector<std::vector<Verdict>> verdicts(R, std::vector<Verdict>(A));

  detail::run_replicates(R, config.workers, [&](std::size_t r) {
    const SampledPath path = source(stream_seed(config.generator.seed, r));
    if (path.grid().J() < config.n_levels) throw ResolutionError("replicate path is coarser than n_levels");
    for (std::size_t i = 0; i < A; ++i) {
      const LevelSeriesReport s = kamont_series(path, config.n_levels, config.alpha_grid[i], config.p);
      slopes[r][i] = s.fitted_log2_slope;
      verdicts[r][i] = s.verdict;
    }
  });

  ExperimentReport report;
  report.config = config;
  std::vector<std::optional<double>> medians;
  for (std::size_t i = 0; i < A; ++i) {
    SweepRow row;
    row.alpha = config.alpha_grid[i];
    std::vector<double> present;
    std::size_t conv = 0, div = 0, inc = 0;
    for (std::size_t r = 0; r < R; ++r) {
      if (slopes[r][i]) present.push_back(*slopes[r][i]);
      switch (verdicts[r][i]) {
        case Verdict::Converges: ++conv; break;
        case Verdict::Diverges: ++div; break;
        case Verdict::Inconclusive: ++inc; break;
      }
    }
    row.median_slope = median(std::move(present));
    const double n = static_cast<double>(R);
    row.frac_converges = static_cast<double>(conv) / n;
    // The last nonempty bucket is the complement: s + fl(1 - s) == 1 exactly for s in [0, 1].
    if (inc == 0) {
      row.frac_diverges = div == 0 ? 0.0 : 1.0 - row.frac_converges;
      row.frac_inconclusive = 0.0;
    } else {
      row.frac_diverges = static_cast<double>(div) / n;
      row.frac_inconclusive = 1.0 - (row.frac_converges + row.frac_diverges);
    }
    medians.push_back(row.median_slope);
    report.rows.push_back(row);
  }
  report.critical_alpha = zero_crossing(config.alpha_grid, medians);
  report.wall_time_seconds = detail::seconds_since(start);
  return report;
}

inline ExperimentReport run_alpha_sweep(const ExperimentConfig& config) {
  return run_alpha_sweep(config, generator_source(config.generator));
}

struct ProfileRow {
  double alpha = 0.0;
  double p = 0.0;
  double q = 0.0;
  double median_seminorm = 0.0;
  double q25_seminorm = 0.0;
  double q75_seminorm = 0.0;
  /// seminorm_truncated per replicate, in replicate order.
  std::vector<double> seminorms;
};

struct ProfileReport {
  ExperimentConfig config;
  std::vector<ProfileRow> rows;
  double wall_time_seconds = 0.0;
  std::string version = kVersion;
};

/// besov_norm of every replicate path under every parameter triple. Only the
/// generator, replicates and workers fields of the config are used.
inline ProfileReport run_besov_profile(const ExperimentConfig& config, const std::vector<BesovParams>& params,
                                       const PathSource& source, const BesovOptions& options = {}) {
  config.generator.validate();
  if (config.replicates < 1) throw ConfigurationError("replicates must be at least 1");
  if (params.empty()) throw ConfigurationError("besov profile needs at least one parameter triple");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t R = config.replicates;
  std::vector<std::vector<double>> values(params.size(), std::vector<double>(R));

  detail::run_replicates(R, config.workers, [&](std::size_t r) {
    const SampledPath path = source(stream_seed(config.generator.seed, r));
    for (std::size_t i = 0; i < params.size(); ++i)
      values[i][r] = besov_norm(path, params[i], options).seminorm_truncated;
  });

  ProfileReport report;
  report.config = config;
  for (std::size_t i = 0; i < params.size(); ++i) {
    ProfileRow row;
    row.alpha = params[i].alpha;
    row.p = params[i].p;
    row.q = params[i].q;
    row.median_seminorm = empirical_quantile(values[i], 0.5);
    row.q25_seminorm = empirical_quantile(values[i], 0.25);
    row.q75_seminorm = empirical_quantile(values[i], 0.75);
    row.seminorms = std::move(values[i]);
    report.rows.push_back(std::move(row));
  }
  report.wall_time_seconds = detail::seconds_since(start);
  return report;
}

inline ProfileReport run_besov_profile(const ExperimentConfig& config, const std::vector<BesovParams>& params,
                                       const BesovOptions& options = {}) {
  return run_besov_profile(config, params, generator_source(config.generator), options);
}

}  // namespace besovlab
