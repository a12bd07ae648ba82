#pragma once

// Dyadic series sum_n 2^{n(alpha p - 1)} sum_k |level-n increment k|^p, whose
// convergence for a continuous f implies f in B^alpha_{pp}.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "besovlab/error.hpp"
#include "besovlab/path.hpp"

namespace besovlab {

/// Half-width of the Inconclusive band around zero slope.
inline constexpr double kSlopeThreshold = 0.025;
inline constexpr int kMinSeriesLevels = 6;

enum class Verdict { Converges, Diverges, Inconclusive };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converges: return "Converges";
    case Verdict::Diverges: return "Diverges";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return {};
}

inline Verdict verdict_for_slope(double slope) {
  if (slope < -kSlopeThreshold) return Verdict::Converges;
  if (slope > kSlopeThreshold) return Verdict::Diverges;
  return Verdict::Inconclusive;
}

namespace detail {

inline void check_exponents(double alpha, double p) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("p must satisfy 1 <= p < inf");
}

/// sum_k |d_k|^p in index order.
inline double power_sum(const std::vector<double>& d, double p) {
  double sum = 0.0;
  if (p == 2.0) {
    for (double x : d) sum += x * x;
  } else {
    for (double x : d) sum += std::pow(std::abs(x), p);
  }
  return sum;
}

inline double level_weight(int n, double alpha, double p) { return std::exp2(n * (alpha * p - 1.0)); }

}  // namespace detail

/// T_n = 2^{n(alpha p - 1)} sum_k |level-n increment k|^p.
inline double level_term(const SampledPath& path, int n, double alpha, double p) {
  detail::check_exponents(alpha, p);
  if (n < 1) throw ParameterError("level must be at least 1");
  if (n > path.grid().J())
    throw ResolutionError("level " + std::to_string(n) + " exceeds path resolution J = " +
                          std::to_string(path.grid().J()));
  return detail::level_weight(n, alpha, p) * detail::power_sum(increments_of(path, n), p);
}

struct LevelSeriesReport {
  double alpha = 0.0;
  double p = 0.0;
  std::vector<int> levels;
  std::vector<double> terms;
  std::vector<double> partial_sums;
  /// OLS slope of log2 T_n against n over the tail window; absent when a tail term is zero.
  std::optional<double> fitted_log2_slope;
  int tail_levels = 0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Least-squares slope of y against x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

/// Fits the tail slope of T_1..T_N and classifies the series.
inline LevelSeriesReport series_from_terms(std::vector<double> terms, double alpha, double p) {
  const int N = static_cast<int>(terms.size());
  LevelSeriesReport report;
  report.alpha = alpha;
  report.p = p;
  report.terms = std::move(terms);
  report.levels.resize(N);
  report.partial_sums.resize(N);
  double running = 0.0;
  for (int n = 1; n <= N; ++n) {
    report.levels[n - 1] = n;
    running += report.terms[n - 1];
    report.partial_sums[n - 1] = running;
  }
  report.tail_levels = (N + 1) / 2;
  std::vector<double> x, y;
  bool zero_in_tail = false;
  for (int n = N - report.tail_levels + 1; n <= N; ++n) {
    const double t = report.terms[n - 1];
    if (t == 0.0) zero_in_tail = true;
    x.push_back(n);
    y.push_back(std::log2(t));
  }
  if (zero_in_tail) {
    report.verdict = running == 0.0 ? Verdict::Converges : Verdict::Inconclusive;
  } else {
    report.fitted_log2_slope = ols_slope(x, y);
    report.verdict = verdict_for_slope(*report.fitted_log2_slope);
  }
  return report;
}

inline LevelSeriesReport kamont_series(const SampledPath& path, int N, double alpha, double p) {
  detail::check_exponents(alpha, p);
  if (N < kMinSeriesLevels)
    throw ParameterError("series needs at least " + std::to_string(kMinSeriesLevels) + " levels, got " +
                         std::to_string(N));
  if (N > path.grid().J())
    throw ParameterError("series depth N = " + std::to_string(N) + " exceeds path resolution J = " +
                         std::to_string(path.grid().J()));
  std::vector<double> terms(N);
  for (int n = 1; n <= N; ++n) terms[n - 1] = level_term(path, n, alpha, p);
  return series_from_terms(std::move(terms), alpha, p);
}

/// (T_n(alpha2), 2^{n p (alpha2 - alpha1)} T_n(alpha1)); equal up to rounding
/// since T_n depends on alpha only through its prefactor.
inline std::pair<double, double> reweight_identity_check(const SampledPath& path, int n, double alpha1, double alpha2,
                                                         double p) {
  const double direct = level_term(path, n, alpha2, p);
  const double reweighted = std::exp2(n * p * (alpha2 - alpha1)) * level_term(path, n, alpha1, p);
  return {direct, reweighted};
}

}  // namespace besovlab
