#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "besovlab/dyadic_criterion.hpp"
#include "besovlab/lemma.hpp"

namespace besovlab {
namespace {

std::vector<std::vector<int>> signs_for(const DisjointFamily& family, int pattern) {
  std::vector<std::vector<int>> signs(family.depth());
  for (int n = 1; n <= family.depth(); ++n)
    for (std::size_t k = 0; k < family.level(n).size(); ++k)
      signs[n - 1].push_back(pattern == 0 ? 1 : pattern == 1 ? (k % 2 ? -1 : 1) : -1);
  return signs;
}

TEST(WeightSequence, GeometricMargin) {
  const auto w = WeightSequence::geometric(0.4, 2, 10);
  EXPECT_TRUE(w.summable());
  EXPECT_NEAR(w(1), std::exp2(-0.1), 1e-15);
  const double r = std::exp2(-0.1);
  EXPECT_NEAR(w.summability_margin(), r / (1 - r), 1e-12);
  EXPECT_FALSE(WeightSequence::geometric(0.6, 2, 10).summable());
  EXPECT_TRUE(std::isinf(WeightSequence::geometric(0.6, 2, 10).summability_margin()));
  EXPECT_THROW(WeightSequence::custom({1.0, 0.0}), ParameterError);
}

TEST(DisjointFamily, RejectsOverlap) {
  EXPECT_THROW(DisjointFamily({{DyadicSet{{1, 1}}, DyadicSet{{2, 2}}}}), ConfigurationError);
  EXPECT_NO_THROW(DisjointFamily({{DyadicSet{{1, 1}}, DyadicSet{{2, 3}}}}));
  EXPECT_EQ(DisjointFamily::full_dyadic(3).level(3).size(), 8u);
}

TEST(LemmaStatistic, ZeroMeasureGivesZeros) {
  const StochasticMeasureSample zero(Grid(0, 1, 6), std::vector<double>(64, 0.0));
  for (double s : lemma_statistic(zero, WeightSequence::geometric(0.4, 2, 6), DisjointFamily::full_dyadic(6)))
    EXPECT_EQ(s, 0.0);
}

TEST(LemmaStatistic, LinearMeasureClosedForm) {
  // mu(Delta_kn) = 2^-n, 2^n sets, a_n = 2^-n: S_N = sum_n 2^{-2n} 2^n 2^{-2n} = sum 2^{-3n}.
  const int N = 8;
  const StochasticMeasureSample lebesgue(Grid(0, 1, N), std::vector<double>(256, 1.0 / 256));
  std::vector<double> a(N);
  for (int n = 1; n <= N; ++n) a[n - 1] = std::exp2(-n);
  const auto s = lemma_statistic(lebesgue, WeightSequence::custom(a), DisjointFamily::full_dyadic(N));
  double expected = 0.0;
  for (int n = 1; n <= N; ++n) {
    expected += std::exp2(-3 * n);
    EXPECT_NEAR(s[n - 1], expected, 1e-15);
  }
}

TEST(LemmaStatistic, PartialSumsAreNondecreasing) {
  const auto sample = generate_bm(Grid(0, 1, 10), 4);
  const auto s = lemma_statistic(sample, WeightSequence::geometric(0.4, 2, 10), DisjointFamily::full_dyadic(10));
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i], s[i - 1]);
}

TEST(LemmaStatistic, ScalesQuadratically) {
  const auto sample = generate_bm(Grid(0, 1, 8), 9);
  std::vector<double> scaled(sample.increments().begin(), sample.increments().end());
  for (double& x : scaled) x *= -1.5;
  const StochasticMeasureSample other(sample.grid(), scaled);
  const auto w = WeightSequence::geometric(0.3, 2, 8);
  const auto family = DisjointFamily::full_dyadic(8);
  const auto a = lemma_statistic(sample, w, family);
  const auto b = lemma_statistic(other, w, family);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], 2.25 * a[i], 1e-12 * b[i]);
}

TEST(LemmaStatistic, MatchesDyadicSeriesPartialSums) {
  for (unsigned r = 0; r < 5; ++r) {
    const auto sample = generate_bm(Grid(0, 1, 12), stream_seed(77, r));
    const auto lemma = lemma_statistic(sample, WeightSequence::geometric(0.4, 2, 12), DisjointFamily::full_dyadic(12));
    const auto series = kamont_series(path_of(sample), 12, 0.4, 2);
    for (std::size_t i = 0; i < lemma.size(); ++i)
      EXPECT_NEAR(lemma[i] / series.partial_sums[i] - 1.0, 0.0, 1e-12);
  }
}

TEST(PaleyZygmund, SmallExamples) {
  EXPECT_EQ(paley_zygmund_check({1}, PZMode::exact()).probability, 1.0);
  const auto two = paley_zygmund_check({1, 1}, PZMode::exact());
  EXPECT_EQ(two.probability, 0.5);
  EXPECT_TRUE(two.pass);
  EXPECT_EQ(two.evaluated, 4u);
  // |sum| is 1 or 3 for three unit signs; 1 >= 3/4.
  EXPECT_EQ(paley_zygmund_check({1, 1, 1}, PZMode::exact()).probability, 1.0);
}

TEST(PaleyZygmund, LimitsAndErrors) {
  EXPECT_THROW(paley_zygmund_check({}, PZMode::exact()), ParameterError);
  EXPECT_THROW(paley_zygmund_check(std::vector<double>(21, 1.0), PZMode::exact()), SizeError);
  EXPECT_THROW(paley_zygmund_check({1, NAN}, PZMode::exact()), ParameterError);
  EXPECT_NO_THROW(paley_zygmund_check(std::vector<double>(20, 1.0), PZMode::exact(4)));
}

TEST(PaleyZygmund, WorkerCountDoesNotMatter) {
  std::vector<double> l(18);
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = 1.0 / (1.0 + static_cast<double>(i));
  EXPECT_EQ(paley_zygmund_check(l, PZMode::exact(1)).probability, paley_zygmund_check(l, PZMode::exact(6)).probability);
}

TEST(PaleyZygmund, MonteCarloAgreesWithEnumeration) {
  const std::vector<double> l{3, 1, 0.5, 2, 0.25, 1, 1, 4};
  const auto exact = paley_zygmund_check(l, PZMode::exact());
  const auto mc = paley_zygmund_check(l, PZMode::monte_carlo(200000, 5));
  EXPECT_NEAR(mc.probability, exact.probability, 5 * mc.standard_error);
  EXPECT_TRUE(mc.pass);
  EXPECT_EQ(paley_zygmund_check(l, PZMode::monte_carlo(1000, 5)).probability,
            paley_zygmund_check(l, PZMode::monte_carlo(1000, 5)).probability);
}

TEST(PaleyZygmund, BoundHoldsOnRandomInstances) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> length(1, 12);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> l(static_cast<std::size_t>(length(rng)));
    for (double& x : l) x = normal(rng);
    EXPECT_TRUE(paley_zygmund_check(l, PZMode::exact()).pass);
  }
}

TEST(SignRandomization, SplitMatchesSignedSum) {
  const auto family = DisjointFamily::full_dyadic(6);
  const auto weights = WeightSequence::geometric(0.4, 2, 6);
  const auto sample = generate_bm(Grid(0, 1, 8), 31);
  for (int pattern : {0, 1, 2}) {
    const auto signs = signs_for(family, pattern);
    const double direct = signed_sum(sample, family, weights, signs);
    const double split = split_sum(sample, randomize_signs(family, signs), weights);
    EXPECT_NEAR(split, direct, 1e-12 * std::max(1.0, std::abs(direct))) << "pattern " << pattern;
  }
}

TEST(SignRandomization, AllPositiveGivesEmptyNegativeSets) {
  const auto family = DisjointFamily::full_dyadic(3);
  const auto split = randomize_signs(family, signs_for(family, 0));
  for (int n = 1; n <= 3; ++n) {
    EXPECT_TRUE(split.negative[n - 1].empty());
    EXPECT_EQ(split.positive[n - 1], DyadicSet::full(n));
  }
}

TEST(SignRandomization, MissingSignIsAConfigurationError) {
  const auto family = DisjointFamily::full_dyadic(3);
  auto signs = signs_for(family, 1);
  signs[2].pop_back();
  EXPECT_THROW(randomize_signs(family, signs), ConfigurationError);
  signs = signs_for(family, 1);
  signs[0][0] = 0;
  EXPECT_THROW(randomize_signs(family, signs), ConfigurationError);
}

TEST(BoundednessProbe, ZeroCoefficientsGiveZero) {
  GeneratorSpec spec;
  spec.grid = Grid(0, 1, 8);
  const auto rows = boundedness_probe(spec, {4, 16}, 20, 0.9, {.coefficients = ProbeOptions::Coefficients::Zeros});
  for (const auto& row : rows) EXPECT_EQ(row.quantile, 0.0);
}

TEST(BoundednessProbe, FullPartitionWithUnitCoefficientsIsTheEndpoint) {
  // sum_k mu(Delta_kn) = W(1) for every n, so every size sees the same replicate values.
  GeneratorSpec spec;
  spec.grid = Grid(0, 1, 8);
  spec.seed = 3;
  const auto rows = boundedness_probe(spec, {2, 16, 256}, 50, 0.9,
                                      {.family = ProbeOptions::Family::DyadicPartition,
                                       .coefficients = ProbeOptions::Coefficients::Ones});
  EXPECT_NEAR(rows[1].quantile, rows[0].quantile, 1e-12);
  EXPECT_NEAR(rows[2].quantile, rows[0].quantile, 1e-12);
  EXPECT_THROW(boundedness_probe(spec, {3}, 5, 0.9, {.family = ProbeOptions::Family::DyadicPartition}),
               ParameterError);
}

TEST(BoundednessProbe, DeterministicAcrossWorkersAndValidated) {
  GeneratorSpec spec;
  spec.grid = Grid(0, 1, 8);
  spec.seed = 10;
  const auto a = boundedness_probe(spec, {4, 64}, 40, 0.95, {.workers = 1});
  const auto b = boundedness_probe(spec, {4, 64}, 40, 0.95, {.workers = 4});
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].quantile, b[i].quantile);
  EXPECT_THROW(boundedness_probe(spec, {512}, 5, 0.9), ResolutionError);
  EXPECT_THROW(boundedness_probe(spec, {4}, 5, 1.0), ParameterError);
}

TEST(EmpiricalQuantile, Type7) {
  EXPECT_EQ(empirical_quantile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_EQ(empirical_quantile({1, 2, 3, 4, 5}, 0.25), 2.0);
  EXPECT_THROW(empirical_quantile({}, 0.5), ParameterError);
}

}  // namespace
}  // namespace besovlab
