#pragma once

// Computable ingredients of the square-summability lemma for stochastic measures:
// the weighted quadratic statistic, the Paley-Zygmund sign bound, the sign
// randomization into sets B_n / C_n, and a boundedness-in-probability probe for
// sums sum_k c_k mu(A_k) over disjoint A_k with |c_k| <= 1.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "besovlab/error.hpp"
#include "besovlab/generators.hpp"
#include "besovlab/parallel.hpp"
#include "besovlab/path.hpp"
#include "besovlab/random.hpp"

namespace besovlab {

/// Positive weights a_1..a_N.
class WeightSequence {
 public:
  /// Arbitrary positive weights; the margin is their plain sum.
  static WeightSequence custom(std::vector<double> a) {
    for (double x : a)
      if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("lemma weights must be positive and finite");
    WeightSequence w;
    w.margin_ = std::accumulate(a.begin(), a.end(), 0.0);
    w.a_ = std::move(a);
    return w;
  }

  /// a_n = 2^{n (alpha p - 1) / 2}; summable iff alpha p < 1.
  static WeightSequence geometric(double alpha, double p, int N) {
    if (N < 1) throw ParameterError("weight sequence needs at least one term");
    std::vector<double> a(N);
    for (int n = 1; n <= N; ++n) a[n - 1] = std::exp2(n * (alpha * p - 1.0) / 2.0);
    WeightSequence w = custom(std::move(a));
    const double ratio = std::exp2((alpha * p - 1.0) / 2.0);
    w.summable_ = alpha * p < 1.0;
    w.margin_ = w.summable_ ? w.margin_ + w.a_.back() * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    return w;
  }

  std::size_t size() const { return a_.size(); }
  /// a_n, 1-based.
  double operator()(int n) const { return a_[n - 1]; }
  const std::vector<double>& values() const { return a_; }
  /// Upper bound for sum_n a_n (partial sum plus geometric tail for the built-in kind).
  double summability_margin() const { return margin_; }
  bool summable() const { return summable_; }

 private:
  WeightSequence() = default;
  std::vector<double> a_;
  double margin_ = 0.0;
  bool summable_ = true;
};

/// Level n = 1..depth holds pairwise-disjoint sets Delta_{1n}..Delta_{l_n n}.
class DisjointFamily {
 public:
  explicit DisjointFamily(std::vector<std::vector<DyadicSet>> levels) : levels_(std::move(levels)) {
    for (std::size_t n = 0; n < levels_.size(); ++n) {
      int finest = 0;
      for (const auto& s : levels_[n]) finest = std::max(finest, s.level());
      std::vector<std::int64_t> all;
      for (const auto& s : levels_[n]) {
        const DyadicSet r = s.refined(finest);
        all.insert(all.end(), r.indices().begin(), r.indices().end());
      }
      std::sort(all.begin(), all.end());
      if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw ConfigurationError("sets at family level " + std::to_string(n + 1) + " are not pairwise disjoint");
    }
  }

  /// Level n holds the 2^n dyadic intervals Delta_{kn}.
  static DisjointFamily full_dyadic(int depth) {
    std::vector<std::vector<DyadicSet>> levels(depth);
    for (int n = 1; n <= depth; ++n) {
      levels[n - 1].reserve(std::size_t{1} << n);
      for (std::int64_t k = 1; k <= (std::int64_t{1} << n); ++k) levels[n - 1].push_back(DyadicSet{{n, k}});
    }
    return DisjointFamily(std::move(levels));
  }

  int depth() const { return static_cast<int>(levels_.size()); }
  /// Sets of level n, 1-based.
  const std::vector<DyadicSet>& level(int n) const { return levels_[n - 1]; }

 private:
  std::vector<std::vector<DyadicSet>> levels_;
};

/// Partial sums S_n = sum_{m <= n} a_m^2 sum_k mu(Delta_{km})^2, n = 1..depth.
inline std::vector<double> lemma_statistic(const StochasticMeasureSample& sample, const WeightSequence& weights,
                                           const DisjointFamily& family) {
  if (static_cast<int>(weights.size()) < family.depth())
    throw ParameterError("weight sequence shorter than family depth");
  std::vector<double> partial(family.depth());
  double running = 0.0;
  for (int n = 1; n <= family.depth(); ++n) {
    double inner = 0.0;
    for (const auto& set : family.level(n)) {
      const double m = measure_of(sample, set);
      inner += m * m;
    }
    const double a = weights(n);
    running += a * a * inner;
    partial[n - 1] = running;
  }
  return partial;
}

// ---------------------------------------------------------------------------
// Paley-Zygmund: P[(sum lambda_i eps_i)^2 >= sum lambda_i^2 / 4] >= 1/8 for
// independent symmetric signs eps_i.

inline constexpr double kPaleyZygmundFraction = 0.25;
inline constexpr double kPaleyZygmundBound = 0.125;
inline constexpr std::size_t kMaxExactSigns = 20;

struct PZMode {
  enum class Kind { Exact, MonteCarlo };
  Kind kind = Kind::Exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  static PZMode exact(unsigned workers = 1) { return {Kind::Exact, 0, 0, workers}; }
  static PZMode monte_carlo(std::uint64_t samples, std::uint64_t seed) { return {Kind::MonteCarlo, samples, seed, 1}; }
};

struct PZResult {
  double probability = 0.0;
  double bound = kPaleyZygmundBound;
  bool pass = false;
  /// Monte Carlo only.
  double standard_error = 0.0;
  std::uint64_t evaluated = 0;
};

inline PZResult paley_zygmund_check(const std::vector<double>& lambdas, const PZMode& mode) {
  const std::size_t m = lambdas.size();
  if (m == 0) throw ParameterError("Paley-Zygmund check needs at least one coefficient");
  for (double x : lambdas)
    if (!std::isfinite(x)) throw ParameterError("Paley-Zygmund coefficients must be finite");
  double energy = 0.0;
  for (double x : lambdas) energy += x * x;
  const double threshold = kPaleyZygmundFraction * energy;
  auto hits = [&](std::uint64_t mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += ((mask >> i) & 1U) ? lambdas[i] : -lambdas[i];
    return s * s >= threshold;
  };

  PZResult result;
  if (mode.kind == PZMode::Kind::Exact) {
    if (m > kMaxExactSigns)
      throw SizeError("exact Paley-Zygmund enumeration supports at most " + std::to_string(kMaxExactSigns) +
                      " coefficients, got " + std::to_string(m));
    const std::uint64_t patterns = std::uint64_t{1} << m;
    const std::uint64_t chunk = std::uint64_t{1} << std::min<std::size_t>(m, 12);
    const std::size_t chunks = static_cast<std::size_t>((patterns + chunk - 1) / chunk);
    std::vector<std::uint64_t> counts(chunks, 0);
    parallel_for(chunks, mode.workers, [&](std::size_t c) {
      const std::uint64_t lo = c * chunk;
      const std::uint64_t hi = std::min(patterns, lo + chunk);
      for (std::uint64_t mask = lo; mask < hi; ++mask) counts[c] += hits(mask);
    });
    const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    result.evaluated = patterns;
    result.probability = static_cast<double>(total) / static_cast<double>(patterns);
    result.pass = result.probability >= kPaleyZygmundBound;
  } else {
    if (mode.samples == 0) throw ParameterError("Monte Carlo Paley-Zygmund check needs samples > 0");
    Engine engine = make_engine(mode.seed);
    std::uint64_t total = 0;
    for (std::uint64_t s = 0; s < mode.samples; ++s) {
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) sum += (engine() >> 63) ? lambdas[i] : -lambdas[i];
      total += sum * sum >= threshold;
    }
    const double n = static_cast<double>(mode.samples);
    result.evaluated = mode.samples;
    result.probability = static_cast<double>(total) / n;
    result.standard_error = std::sqrt(result.probability * (1.0 - result.probability) / n);
    result.pass = result.probability >= kPaleyZygmundBound - 3.0 * result.standard_error;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Sign randomization.

/// Per level n: B_n = union of Delta_{kn} with sign +1, C_n = union with sign -1.
struct SignSplit {
  std::vector<DyadicSet> positive;
  std::vector<DyadicSet> negative;
};

inline void check_signs(const DisjointFamily& family, const std::vector<std::vector<int>>& signs) {
  if (static_cast<int>(signs.size()) != family.depth())
    throw ConfigurationError("sign assignment has " + std::to_string(signs.size()) + " levels, family has " +
                             std::to_string(family.depth()));
  for (int n = 1; n <= family.depth(); ++n) {
    if (signs[n - 1].size() != family.level(n).size())
      throw ConfigurationError("missing signs at family level " + std::to_string(n));
    for (int s : signs[n - 1])
      if (s != 1 && s != -1) throw ConfigurationError("signs must be +1 or -1");
  }
}

inline SignSplit randomize_signs(const DisjointFamily& family, const std::vector<std::vector<int>>& signs) {
  check_signs(family, signs);
  SignSplit split;
  for (int n = 1; n <= family.depth(); ++n) {
    DyadicSet b, c;
    const auto& sets = family.level(n);
    for (std::size_t k = 0; k < sets.size(); ++k) {
      if (signs[n - 1][k] > 0) b = b.united(sets[k]);
      else c = c.united(sets[k]);
    }
    split.positive.push_back(std::move(b));
    split.negative.push_back(std::move(c));
  }
  return split;
}

/// sum_n a_n sum_k eps_{kn} mu(Delta_{kn}).
inline double signed_sum(const StochasticMeasureSample& sample, const DisjointFamily& family,
                         const WeightSequence& weights, const std::vector<std::vector<int>>& signs) {
  check_signs(family, signs);
  double total = 0.0;
  for (int n = 1; n <= family.depth(); ++n) {
    double inner = 0.0;
    const auto& sets = family.level(n);
    for (std::size_t k = 0; k < sets.size(); ++k) inner += signs[n - 1][k] * measure_of(sample, sets[k]);
    total += weights(n) * inner;
  }
  return total;
}

/// sum_n a_n (mu(B_n) - mu(C_n)).
inline double split_sum(const StochasticMeasureSample& sample, const SignSplit& split, const WeightSequence& weights) {
  double total = 0.0;
  for (std::size_t n = 0; n < split.positive.size(); ++n)
    total += weights(static_cast<int>(n) + 1) *
             (measure_of(sample, split.positive[n]) - measure_of(sample, split.negative[n]));
  return total;
}

// ---------------------------------------------------------------------------
// Boundedness probe.

struct ProbeOptions {
  enum class Family {
    /// Random subsets of finest cells grouped into the requested number of sets.
    RandomGroups,
    /// The full level-n dyadic partition; sizes must be powers of two.
    DyadicPartition
  };
  enum class Coefficients { Uniform, Ones, Zeros };

  Family family = Family::RandomGroups;
  Coefficients coefficients = Coefficients::Uniform;
  unsigned workers = 1;
};

struct ProbeRow {
  std::size_t family_size = 0;
  double quantile = 0.0;
};

/// Linearly interpolated empirical quantile (type 7).
inline double empirical_quantile(std::vector<double> x, double level) {
  if (x.empty()) throw ParameterError("quantile of an empty sample");
  std::sort(x.begin(), x.end());
  const double pos = level * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

namespace detail {

inline std::vector<DyadicSet> draw_family(const Grid& grid, std::size_t size, ProbeOptions::Family mode,
                                          Engine& engine) {
  const int J = grid.J();
  std::vector<DyadicSet> family;
  if (mode == ProbeOptions::Family::DyadicPartition) {
    const int n = std::countr_zero(size);
    for (std::int64_t k = 1; k <= static_cast<std::int64_t>(size); ++k) family.push_back(DyadicSet{{n, k}});
    return family;
  }
  const std::size_t cells = grid.cells();
  std::vector<std::int64_t> order(cells);
  std::iota(order.begin(), order.end(), std::int64_t{1});
  std::shuffle(order.begin(), order.end(), engine);
  const std::size_t covered = std::uniform_int_distribution<std::size_t>(size, cells)(engine);
  std::vector<std::vector<std::int64_t>> groups(size);
  for (std::size_t i = 0; i < size; ++i) groups[i].push_back(order[i]);
  std::uniform_int_distribution<std::size_t> pick(0, size - 1);
  for (std::size_t i = size; i < covered; ++i) groups[pick(engine)].push_back(order[i]);
  family.reserve(size);
  for (auto& g : groups) family.push_back(DyadicSet::from_indices(J, std::move(g)));
  return family;
}

}  // namespace detail

/// For each family size, the empirical `quantile` of |sum_k c_k mu(A_k)| across
/// replicates. Replicate r uses stream_seed(generator.seed, r).
inline std::vector<ProbeRow> boundedness_probe(const GeneratorSpec& generator, const std::vector<std::size_t>& sizes,
                                               std::size_t replicates, double quantile,
                                               const ProbeOptions& options = {}) {
  generator.validate();
  if (!(quantile > 0.0 && quantile < 1.0)) throw ParameterError("probe quantile must lie in (0, 1)");
  if (replicates < 1) throw ParameterError("probe needs at least one replicate");
  const std::size_t cells = generator.grid.cells();
  for (auto s : sizes) {
    if (s < 1) throw ParameterError("family sizes must be positive");
    if (s > cells) throw ResolutionError("family size " + std::to_string(s) + " exceeds 2^J = " + std::to_string(cells));
    if (options.family == ProbeOptions::Family::DyadicPartition && !std::has_single_bit(s))
      throw ParameterError("dyadic partition sizes must be powers of two");
  }

  std::vector<std::vector<double>> sums(sizes.size(), std::vector<double>(replicates));
  parallel_for(replicates, options.workers, [&](std::size_t r) {
    const std::uint64_t seed = stream_seed(generator.seed, r);
    const StochasticMeasureSample sample = generate(generator, seed);
    Engine engine = make_engine(stream_seed(seed, 1));
    std::uniform_real_distribution<double> coefficient(-1.0, 1.0);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto family = detail::draw_family(generator.grid, sizes[i], options.family, engine);
      double total = 0.0;
      for (const auto& set : family) {
        double c = 0.0;
        switch (options.coefficients) {
          case ProbeOptions::Coefficients::Uniform: c = coefficient(engine); break;
          case ProbeOptions::Coefficients::Ones: c = 1.0; break;
          case ProbeOptions::Coefficients::Zeros: c = 0.0; break;
        }
        total += c * measure_of(sample, set);
      }
      sums[i][r] = std::abs(total);
    }
  });

  std::vector<ProbeRow> rows;
  for (std::size_t i = 0; i < sizes.size(); ++i) rows.push_back({sizes[i], empirical_quantile(sums[i], quantile)});
  return rows;
}

}  // namespace besovlab
