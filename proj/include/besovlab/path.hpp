#pragma once

// Dyadic grids, sampled paths, the finite dyadic set algebra and
// stochastic-measure samples on it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "besovlab/error.hpp"

namespace besovlab {

inline constexpr int kMaxLevel = 24;

/// Uniform dyadic grid on [a, b] with 2^J + 1 points.
class Grid {
 public:
  Grid(double a, double b, int J) : a_(a), b_(b), J_(J) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a))
      throw ParameterError("grid requires finite a < b");
    if (J < 1 || J > kMaxLevel)
      throw ParameterError("grid resolution J must lie in [1, " + std::to_string(kMaxLevel) + "], got " +
                           std::to_string(J));
  }

  double a() const { return a_; }
  double b() const { return b_; }
  int J() const { return J_; }
  double length() const { return b_ - a_; }
  std::size_t cells() const { return std::size_t{1} << J_; }
  std::size_t points() const { return cells() + 1; }
  double dx() const { return std::ldexp(b_ - a_, -J_); }

  /// Grid point k; point(0) == a and point(cells()) == b exactly.
  double point(std::size_t k) const {
    if (k == 0) return a_;
    if (k >= cells()) return b_;
    return a_ + (b_ - a_) * std::ldexp(static_cast<double>(k), -J_);
  }

  /// Midpoint of the k-th finest cell, 0-based.
  double midpoint(std::size_t k) const {
    return a_ + (b_ - a_) * std::ldexp(static_cast<double>(2 * k + 1), -J_ - 1);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double a_;
  double b_;
  int J_;
};

/// Function values at every grid point; piecewise linear between them.
class SampledPath {
 public:
  SampledPath(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.points())
      throw ParameterError("path needs " + std::to_string(grid_.points()) + " values, got " +
                           std::to_string(values_.size()));
    for (double v : values_)
      if (!std::isfinite(v)) throw NumericError("path values must be finite");
  }

  static SampledPath from_function(Grid grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.points());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.point(k));
    return SampledPath(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

  /// Piecewise-linear interpolant; x is clamped to [a, b].
  double evaluate(double x) const {
    const double s = (x - grid_.a()) / grid_.dx();
    if (s <= 0.0) return values_.front();
    if (s >= static_cast<double>(grid_.cells())) return values_.back();
    const auto k = static_cast<std::size_t>(s);
    const double frac = s - static_cast<double>(k);
    return values_[k] + frac * (values_[k + 1] - values_[k]);
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Half-open interval (a + (k-1) 2^-n (b-a), a + k 2^-n (b-a)], 1 <= k <= 2^n.
struct DyadicInterval {
  int level = 0;
  std::int64_t index = 1;

  DyadicInterval() = default;
  DyadicInterval(int n, std::int64_t k) : level(n), index(k) {
    if (n < 0) throw ParameterError("dyadic level must be nonnegative");
    if (n > kMaxLevel) throw ResolutionError("dyadic level " + std::to_string(n) + " exceeds maximum resolution");
    if (k < 1 || k > (std::int64_t{1} << n))
      throw ParameterError("dyadic index " + std::to_string(k) + " out of range at level " + std::to_string(n));
  }

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

/// Finite union of dyadic intervals, kept in normal form: every member refined to
/// the finest level involved, sorted by index, without repetition.
class DyadicSet {
 public:
  DyadicSet() = default;

  DyadicSet(std::initializer_list<DyadicInterval> members) : DyadicSet(std::vector<DyadicInterval>(members)) {}

  explicit DyadicSet(const std::vector<DyadicInterval>& members) {
    for (const auto& m : members) level_ = std::max(level_, m.level);
    for (const auto& m : members) {
      const std::int64_t span = std::int64_t{1} << (level_ - m.level);
      for (std::int64_t j = 0; j < span; ++j) indices_.push_back((m.index - 1) * span + j + 1);
    }
    normalize();
  }

  /// Union of all intervals at level n, i.e. (a, b].
  static DyadicSet full(int n) {
    DyadicInterval probe(n, 1);  // validates n
    DyadicSet s;
    s.level_ = probe.level;
    s.indices_.resize(std::size_t{1} << n);
    for (std::size_t k = 0; k < s.indices_.size(); ++k) s.indices_[k] = static_cast<std::int64_t>(k) + 1;
    return s;
  }

  /// Set from sorted-or-not 1-based indices at a single level.
  static DyadicSet from_indices(int n, std::vector<std::int64_t> indices) {
    DyadicSet s;
    s.level_ = n;
    for (auto k : indices) DyadicInterval(n, k);
    s.indices_ = std::move(indices);
    s.normalize();
    return s;
  }

  int level() const { return level_; }
  std::span<const std::int64_t> indices() const { return indices_; }
  bool empty() const { return indices_.empty(); }

  std::vector<DyadicInterval> intervals() const {
    std::vector<DyadicInterval> out;
    out.reserve(indices_.size());
    for (auto k : indices_) out.emplace_back(level_, k);
    return out;
  }

  /// Same set expressed at a finer level n >= level().
  DyadicSet refined(int n) const {
    if (n < level_) throw ParameterError("cannot coarsen a dyadic set");
    if (n > kMaxLevel) throw ResolutionError("dyadic level exceeds maximum resolution");
    DyadicSet s;
    s.level_ = n;
    const std::int64_t span = std::int64_t{1} << (n - level_);
    s.indices_.reserve(indices_.size() * static_cast<std::size_t>(span));
    for (auto k : indices_)
      for (std::int64_t j = 0; j < span; ++j) s.indices_.push_back((k - 1) * span + j + 1);
    return s;
  }

  bool disjoint_with(const DyadicSet& other) const {
    const int n = std::max(level_, other.level_);
    const DyadicSet x = refined(n);
    const DyadicSet y = other.refined(n);
    auto i = x.indices_.begin();
    auto j = y.indices_.begin();
    while (i != x.indices_.end() && j != y.indices_.end()) {
      if (*i == *j) return false;
      if (*i < *j) ++i;
      else ++j;
    }
    return true;
  }

  DyadicSet united(const DyadicSet& other) const {
    const int n = std::max(level_, other.level_);
    DyadicSet x = refined(n);
    const DyadicSet y = other.refined(n);
    x.indices_.insert(x.indices_.end(), y.indices_.begin(), y.indices_.end());
    x.normalize();
    return x;
  }

  friend bool operator==(const DyadicSet&, const DyadicSet&) = default;

 private:
  void normalize() {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  }

  int level_ = 0;
  std::vector<std::int64_t> indices_;
};

/// One realization of a stochastic measure: its value on each finest cell.
/// Coarser sets are evaluated by additivity.
class StochasticMeasureSample {
 public:
  StochasticMeasureSample(Grid grid, std::vector<double> increments)
      : grid_(grid), increments_(std::move(increments)) {
    if (increments_.size() != grid_.cells())
      throw ParameterError("measure sample needs " + std::to_string(grid_.cells()) + " increments, got " +
                           std::to_string(increments_.size()));
    for (double v : increments_)
      if (!std::isfinite(v)) throw NumericError("measure increments must be finite");
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> increments() const { return increments_; }

 private:
  Grid grid_;
  std::vector<double> increments_;
};

/// (alpha, p, q) of a Besov space. The regime p >= 2, alpha < 1/p where almost-sure
/// membership is guaranteed is reported, not enforced.
struct BesovParams {
  double alpha;
  double p;
  double q;

  BesovParams(double alpha_, double p_, double q_) : alpha(alpha_), p(p_), q(q_) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("Besov alpha must lie in (0, 1)");
    if (!(p >= 1.0 && std::isfinite(p))) throw ParameterError("Besov p must satisfy 1 <= p < inf");
    if (!(q >= 1.0 && std::isfinite(q))) throw ParameterError("Besov q must satisfy 1 <= q < inf");
  }

  bool in_guaranteed_regime() const { return p >= 2.0 && alpha < 1.0 / p; }
};

/// mu(A): sum of the finest-level increments covered by A.
inline double measure_of(const StochasticMeasureSample& sample, const DyadicSet& set) {
  const int J = sample.grid().J();
  if (set.level() > J)
    throw ResolutionError("set level " + std::to_string(set.level()) + " exceeds sample resolution J = " +
                          std::to_string(J));
  const auto inc = sample.increments();
  const std::size_t span = std::size_t{1} << (J - set.level());
  double sum = 0.0;
  for (auto k : set.indices()) {
    const std::size_t first = static_cast<std::size_t>(k - 1) * span;
    for (std::size_t i = first; i < first + span; ++i) sum += inc[i];
  }
  return sum;
}

/// The path t -> mu((a, t]) on the sample's grid.
inline SampledPath path_of(const StochasticMeasureSample& sample) {
  const auto inc = sample.increments();
  std::vector<double> v(inc.size() + 1);
  v[0] = 0.0;
  for (std::size_t k = 0; k < inc.size(); ++k) v[k + 1] = v[k] + inc[k];
  return SampledPath(sample.grid(), std::move(v));
}

/// Differences of the path across the 2^n level-n dyadic intervals.
inline std::vector<double> increments_of(const SampledPath& path, int n) {
  const int J = path.grid().J();
  if (n < 0) throw ParameterError("dyadic level must be nonnegative");
  if (n > J)
    throw ResolutionError("level " + std::to_string(n) + " exceeds path resolution J = " + std::to_string(J));
  const std::size_t stride = std::size_t{1} << (J - n);
  const auto v = path.values();
  std::vector<double> d(std::size_t{1} << n);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = v[(k + 1) * stride] - v[k * stride];
  return d;
}

/// Finest-level increments of a path, viewed as a measure sample.
inline StochasticMeasureSample measure_of_path(const SampledPath& path) {
  return StochasticMeasureSample(path.grid(), increments_of(path, path.grid().J()));
}

}  // namespace besovlab
