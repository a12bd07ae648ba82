#pragma once

// Besov norm of a sampled path: L_p norm, L_p modulus of continuity and the
// singular-weight outer integral, truncated at the grid spacing.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "besovlab/error.hpp"
#include "besovlab/parallel.hpp"
#include "besovlab/path.hpp"

namespace besovlab {

namespace detail {

/// |x|^p with a multiplication fast path for small integer exponents.
class Power {
 public:
  explicit Power(double p) : p_(p) {
    if (p == std::floor(p) && p >= 1.0 && p <= 16.0) integer_ = static_cast<int>(p);
  }

  double operator()(double x) const {
    x = std::abs(x);
    if (integer_ == 0) return std::pow(x, p_);
    double r = x;
    for (int i = 1; i < integer_; ++i) r *= x;
    return r;
  }

  double exponent() const { return p_; }

 private:
  double p_;
  int integer_ = 0;
};

/// int_0^1 |u + (v - u) s|^p ds.
inline double cell_integral(double u, double v, const Power& power) {
  const double p = power.exponent();
  if (p == 2.0) return (u * u + u * v + v * v) / 3.0;
  if (std::abs(v - u) > 0.5 * std::max(std::abs(u), std::abs(v))) {
    // Exact: the antiderivative sgn(x)|x|^{p+1}/(p+1), also across a zero crossing.
    const double fu = std::copysign(power(u) * std::abs(u), u);
    const double fv = std::copysign(power(v) * std::abs(v), v);
    return (fv - fu) / ((p + 1.0) * (v - u));
  }
  // Nearly constant sign-definite cell: 5-node Gauss-Legendre avoids the cancellation above.
  static constexpr std::array<double, 5> nodes = {0.5, 0.5 - 0.2692346550528416, 0.5 + 0.2692346550528416,
                                                  0.5 - 0.4530899229693320, 0.5 + 0.4530899229693320};
  static constexpr std::array<double, 5> weights = {0.2844444444444444, 0.2393143352496832, 0.2393143352496832,
                                                    0.1184634425280945, 0.1184634425280945};
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * power(u + (v - u) * nodes[i]);
  return sum;
}

}  // namespace detail

/// L_p norm of the piecewise-linear interpolant over [a, b].
inline double lp_norm(const SampledPath& path, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("L_p norm requires 1 <= p < inf");
  const detail::Power power(p);
  const auto v = path.values();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) sum += detail::cell_integral(v[i], v[i + 1], power);
  return std::pow(sum * path.grid().dx(), 1.0 / p);
}

/// L_p norm of x -> f(x - h) - f(x) over I_h = [a + h, b] for h = m dx, m = 0..cells.
/// Entries above max_shift are left at zero.
inline std::vector<double> shift_norms(const SampledPath& path, double p, std::size_t max_shift, unsigned workers = 1) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("modulus requires 1 <= p < inf");
  const detail::Power power(p);
  const auto v = path.values();
  const std::size_t cells = path.grid().cells();
  max_shift = std::min(max_shift, cells);
  const double dx = path.grid().dx();
  std::vector<double> norms(cells + 1, 0.0);
  parallel_for(max_shift, workers, [&](std::size_t idx) {
    const std::size_t m = idx + 1;
    double sum = 0.0;
    for (std::size_t i = m; i < cells; ++i)
      sum += detail::cell_integral(v[i - m] - v[i], v[i + 1 - m] - v[i + 1], power);
    norms[m] = std::pow(sum * dx, 1.0 / p);
  });
  return norms;
}

namespace detail {

inline std::size_t shifts_within(const Grid& grid, double t) {
  const double ratio = t / grid.dx();
  if (!(ratio >= 1.0 - 1e-12))
    throw ResolutionError("modulus argument t = " + std::to_string(t) + " lies below the grid spacing " +
                          std::to_string(grid.dx()));
  if (ratio > static_cast<double>(grid.cells()) * (1.0 + 1e-12))
    throw ParameterError("modulus argument t exceeds b - a");
  return std::min(static_cast<std::size_t>(std::floor(ratio * (1.0 + 1e-12))), grid.cells());
}

inline std::vector<double> running_max(std::vector<double> x) {
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = std::max(x[i], x[i - 1]);
  return x;
}

}  // namespace detail

/// w_p(t, f): sup over grid shifts 0 <= h <= t. Negative shifts are redundant
/// because substituting x -> x - h maps I_{-h} onto I_h.
inline double modulus(const SampledPath& path, double t, double p) {
  const std::size_t m = detail::shifts_within(path.grid(), t);
  const auto norms = shift_norms(path, p, m);
  return *std::max_element(norms.begin(), norms.begin() + static_cast<std::ptrdiff_t>(m) + 1);
}

struct ModulusCurve {
  std::vector<double> t_grid;
  std::vector<double> w_values;
};

/// t_i = dx * 2^{i / points_per_octave}, from dx up to b - a inclusive.
inline std::vector<double> log_t_grid(const Grid& grid, int points_per_octave) {
  const std::size_t count = static_cast<std::size_t>(grid.J()) * static_cast<std::size_t>(points_per_octave) + 1;
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i)
    t[i] = grid.dx() * std::exp2(static_cast<double>(i) / points_per_octave);
  t.front() = grid.dx();
  t.back() = grid.length();
  return t;
}

namespace detail {

inline ModulusCurve curve_from_norms(const Grid& grid, const std::vector<double>& norms, int points_per_octave) {
  const std::vector<double> sup = running_max(norms);
  ModulusCurve curve;
  curve.t_grid = log_t_grid(grid, points_per_octave);
  curve.w_values.reserve(curve.t_grid.size());
  for (double t : curve.t_grid) curve.w_values.push_back(sup[shifts_within(grid, t)]);
  return curve;
}

}  // namespace detail

inline ModulusCurve modulus_curve(const SampledPath& path, double p, int points_per_octave = 64,
                                  unsigned workers = 1) {
  const auto norms = shift_norms(path, p, path.grid().cells(), workers);
  return detail::curve_from_norms(path.grid(), norms, points_per_octave);
}

struct BesovOptions {
  bool extrapolate = false;
  int points_per_octave = 64;
  unsigned workers = 1;
};

struct BesovNormReport {
  double alpha = 0.0;
  double p = 0.0;
  double q = 0.0;
  double lp_norm = 0.0;
  double seminorm_truncated = 0.0;
  double truncation_floor = 0.0;
  std::optional<double> extrapolated_seminorm;
  /// Power-law exponent of w_p fitted on [dx, 2dx], when extrapolation was requested.
  std::optional<double> tail_exponent;
  bool extrapolation_diverges = false;
  double norm_total = 0.0;
  bool in_guaranteed_regime = false;
};

/// ||f||_{p,q}^alpha with the outer integral truncated to [dx, b - a].
inline BesovNormReport besov_norm(const SampledPath& path, const BesovParams& params, const BesovOptions& options = {}) {
  if (options.points_per_octave < 1) throw ParameterError("points_per_octave must be positive");
  const Grid& grid = path.grid();
  BesovNormReport report;
  report.alpha = params.alpha;
  report.p = params.p;
  report.q = params.q;
  report.in_guaranteed_regime = params.in_guaranteed_regime();
  report.truncation_floor = grid.dx();
  report.lp_norm = lp_norm(path, params.p);

  const auto norms = shift_norms(path, params.p, grid.cells(), options.workers);
  const ModulusCurve curve = detail::curve_from_norms(grid, norms, options.points_per_octave);

  // Trapezoid in u = ln t: w^q t^{-alpha q - 1} dt = w^q t^{-alpha q} du.
  const double aq = params.alpha * params.q;
  const double du = std::log(2.0) / options.points_per_octave;
  const auto integrand = [&](std::size_t i) {
    return std::pow(curve.w_values[i], params.q) * std::pow(curve.t_grid[i], -aq);
  };
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < curve.t_grid.size(); ++i) {
    const double step = (i + 2 == curve.t_grid.size()) ? std::log(curve.t_grid[i + 1] / curve.t_grid[i]) : du;
    integral += 0.5 * step * (integrand(i) + integrand(i + 1));
  }
  report.seminorm_truncated = std::pow(integral, 1.0 / params.q);
  report.norm_total = report.lp_norm + report.seminorm_truncated;

  if (options.extrapolate) {
    const double w1 = norms[1];
    const double w2 = std::max(norms[1], grid.cells() >= 2 ? norms[2] : 0.0);
    if (w1 == 0.0) {
      report.extrapolated_seminorm = report.seminorm_truncated;
    } else {
      const double beta = std::log2(w2 / w1);
      report.tail_exponent = beta;
      if (beta > params.alpha) {
        const double tail = std::pow(w1, params.q) * std::pow(grid.dx(), -aq) / ((beta - params.alpha) * params.q);
        report.extrapolated_seminorm = std::pow(integral + tail, 1.0 / params.q);
      } else {
        report.extrapolation_diverges = true;
      }
    }
    if (report.extrapolated_seminorm) report.norm_total = report.lp_norm + *report.extrapolated_seminorm;
  }
  if (!std::isfinite(report.norm_total)) throw NumericError("Besov norm is not finite");
  return report;
}

}  // namespace besovlab
