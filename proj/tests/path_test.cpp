#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "besovlab/path.hpp"

namespace besovlab {
namespace {

StochasticMeasureSample small_sample() { return StochasticMeasureSample(Grid(0.0, 1.0, 2), {1.0, 2.0, 3.0, 4.0}); }

StochasticMeasureSample random_sample(int J, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> inc(std::size_t{1} << J);
  for (auto& x : inc) x = normal(rng);
  return StochasticMeasureSample(Grid(-1.0, 2.0, J), std::move(inc));
}

TEST(Grid, EndpointsAreExact) {
  const Grid g(0.1, 0.7, 5);
  EXPECT_EQ(g.point(0), 0.1);
  EXPECT_EQ(g.point(32), 0.7);
  EXPECT_EQ(g.points(), 33u);
  EXPECT_DOUBLE_EQ(g.dx(), 0.6 / 32);
  EXPECT_DOUBLE_EQ(g.point(16), 0.4);
}

TEST(Grid, RejectsBadRanges) {
  EXPECT_THROW(Grid(1.0, 1.0, 3), ParameterError);
  EXPECT_THROW(Grid(0.0, 1.0, 0), ParameterError);
  EXPECT_THROW(Grid(0.0, 1.0, 25), ParameterError);
  EXPECT_THROW(Grid(0.0, NAN, 3), ParameterError);
}

TEST(SampledPath, ValidatesLengthAndFiniteness) {
  EXPECT_THROW(SampledPath(Grid(0, 1, 2), {0, 1, 2}), ParameterError);
  EXPECT_THROW(SampledPath(Grid(0, 1, 1), {0, INFINITY, 2}), NumericError);
}

TEST(SampledPath, PiecewiseLinearEvaluation) {
  const SampledPath p(Grid(0, 1, 1), {0.0, 2.0, 0.0});
  EXPECT_DOUBLE_EQ(p.evaluate(0.25), 1.0);
  EXPECT_DOUBLE_EQ(p.evaluate(0.75), 1.0);
  EXPECT_DOUBLE_EQ(p.evaluate(0.5), 2.0);
  EXPECT_DOUBLE_EQ(p.evaluate(-3.0), 0.0);
}

TEST(DyadicSet, NormalFormRefinesToFinestLevel) {
  const DyadicSet s{{1, 2}, {3, 1}};
  EXPECT_EQ(s.level(), 3);
  const std::vector<std::int64_t> expected{1, 5, 6, 7, 8};
  EXPECT_EQ(std::vector<std::int64_t>(s.indices().begin(), s.indices().end()), expected);
  EXPECT_EQ(DyadicSet{}, DyadicSet{});
  EXPECT_TRUE(DyadicSet{}.empty());
}

TEST(DyadicSet, DisjointnessAndUnion) {
  const DyadicSet left{{1, 1}};
  const DyadicSet right{{2, 3}, {2, 4}};
  EXPECT_TRUE(left.disjoint_with(right));
  EXPECT_FALSE(left.disjoint_with(DyadicSet{{3, 4}}));
  EXPECT_EQ(left.united(right), DyadicSet::full(2));
}

TEST(DyadicInterval, RejectsOutOfRangeIndices) {
  EXPECT_THROW(DyadicInterval(2, 0), ParameterError);
  EXPECT_THROW(DyadicInterval(2, 5), ParameterError);
  EXPECT_THROW(DyadicInterval(kMaxLevel + 1, 1), ResolutionError);
}

TEST(MeasureOf, Examples) {
  const auto s = small_sample();
  EXPECT_EQ(measure_of(s, DyadicSet::full(0)), 10.0);
  EXPECT_EQ(measure_of(s, DyadicSet::full(0)), path_of(s)[4] - path_of(s)[0]);
  EXPECT_EQ(measure_of(s, DyadicSet{}), 0.0);
  EXPECT_EQ(measure_of(s, DyadicSet{{1, 1}}), 3.0);
}

TEST(MeasureOf, LevelAboveResolutionIsAnError) {
  EXPECT_THROW(measure_of(small_sample(), DyadicSet{{3, 1}}), ResolutionError);
}

TEST(MeasureOf, AdditiveOverDisjointSets) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_sample(8, static_cast<unsigned>(trial));
    std::vector<std::int64_t> a, b;
    for (std::int64_t k = 1; k <= 256; ++k) {
      const auto r = rng() % 3;
      if (r == 0) a.push_back(k);
      if (r == 1) b.push_back(k);
    }
    const auto A = DyadicSet::from_indices(8, a);
    const auto B = DyadicSet::from_indices(8, b);
    const double lhs = measure_of(s, A.united(B));
    const double rhs = measure_of(s, A) + measure_of(s, B);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(MeasureOf, TelescopesToPathValues) {
  const auto s = random_sample(6, 3);
  const auto path = path_of(s);
  for (std::int64_t k = 1; k <= 64; ++k) {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) idx[i] = i + 1;
    EXPECT_EQ(measure_of(s, DyadicSet::from_indices(6, idx)), path[static_cast<std::size_t>(k)]);
  }
}

TEST(PathOf, PrefixSums) {
  const auto p = path_of(small_sample());
  const std::vector<double> expected{0, 1, 3, 6, 10};
  EXPECT_EQ(std::vector<double>(p.values().begin(), p.values().end()), expected);

  const auto zero = path_of(StochasticMeasureSample(Grid(0, 1, 3), std::vector<double>(8, 0.0)));
  for (double v : zero.values()) EXPECT_EQ(v, 0.0);
}

TEST(PathOf, RoundTripIsBitExactOnDyadicRationals) {
  std::mt19937_64 rng(11);
  std::vector<double> inc(1024);
  for (auto& x : inc) x = std::ldexp(static_cast<double>(static_cast<std::int64_t>(rng() % 2001) - 1000), -10);
  const StochasticMeasureSample s(Grid(0, 1, 10), inc);
  const auto back = increments_of(path_of(s), 10);
  EXPECT_EQ(back, inc);
}

TEST(PathOf, RoundTripOnGaussianIncrementsToRounding) {
  const auto s = random_sample(10, 5);
  const auto back = increments_of(path_of(s), 10);
  for (std::size_t k = 0; k < back.size(); ++k) EXPECT_NEAR(back[k], s.increments()[k], 1e-13);
}

TEST(IncrementsOf, Examples) {
  const auto constant = SampledPath(Grid(0, 1, 4), std::vector<double>(17, 2.5));
  for (int n = 0; n <= 4; ++n)
    for (double d : increments_of(constant, n)) EXPECT_EQ(d, 0.0);

  const auto ramp = SampledPath::from_function(Grid(0, 1, 6), [](double x) { return x; });
  const auto d = increments_of(ramp, 3);
  ASSERT_EQ(d.size(), 8u);
  for (double x : d) EXPECT_EQ(x, 0.125);
  EXPECT_THROW(increments_of(ramp, 7), ResolutionError);
}

TEST(IncrementsOf, RefinementConsistency) {
  const auto path = path_of(random_sample(9, 21));
  for (int n = 0; n < 9; ++n) {
    const auto coarse = increments_of(path, n);
    const auto fine = increments_of(path, n + 1);
    for (std::size_t k = 0; k < coarse.size(); ++k)
      EXPECT_NEAR(coarse[k], fine[2 * k] + fine[2 * k + 1], 1e-12 * (1.0 + std::abs(coarse[k])));
  }
}

TEST(BesovParams, RangesAndRegimeFlag) {
  EXPECT_THROW(BesovParams(0.0, 2, 2), ParameterError);
  EXPECT_THROW(BesovParams(1.0, 2, 2), ParameterError);
  EXPECT_THROW(BesovParams(0.3, 0.5, 2), ParameterError);
  EXPECT_THROW(BesovParams(0.3, 2, INFINITY), ParameterError);
  EXPECT_TRUE(BesovParams(0.4, 2, 2).in_guaranteed_regime());
  EXPECT_FALSE(BesovParams(0.6, 2, 2).in_guaranteed_regime());
  EXPECT_FALSE(BesovParams(0.3, 1.5, 2).in_guaranteed_regime());
}

}  // namespace
}  // namespace besovlab
