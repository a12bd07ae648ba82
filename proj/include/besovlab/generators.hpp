#pragma once

// Random measure samples: Brownian motion, Ito integrals of deterministic
// integrands, fractional Gaussian noise and weighted fBm measures.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "besovlab/error.hpp"
#include "besovlab/path.hpp"
#include "besovlab/random.hpp"
#include "besovlab/weight.hpp"

namespace besovlab {

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Unnormalized forward DFT, in place.
inline void forward_dft(std::vector<std::complex<double>>& data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericError("FFTW failed to create a plan");
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace detail

/// Autocovariance of unit-step fractional Gaussian noise at lag m.
inline double fgn_autocovariance(std::size_t m, double hurst) {
  const double h2 = 2.0 * hurst;
  const double k = static_cast<double>(m);
  if (m == 0) return 1.0;
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(k - 1.0, h2));
}

inline std::vector<double> fgn_autocovariances(std::size_t n, double hurst) {
  std::vector<double> gamma(n);
  for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocovariance(k, hurst);
  return gamma;
}

/// Eigenvalues of the minimal circulant embedding (size 2n) of the n x n
/// Toeplitz covariance with lags gamma[0..n].
inline std::vector<double> circulant_eigenvalues(const std::vector<double>& gamma) {
  const std::size_t n = gamma.size() - 1;
  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> row(m);
  for (std::size_t j = 0; j <= n; ++j) row[j] = gamma[j];
  for (std::size_t j = 1; j < n; ++j) row[m - j] = row[j];
  detail::forward_dft(row);
  std::vector<double> eig(m);
  for (std::size_t k = 0; k < m; ++k) eig[k] = row[k].real();
  return eig;
}

enum class Synthesis { Automatic, Circulant, Sequential };

struct GaussianDraw {
  std::vector<double> values;
  Synthesis used;
};

/// Exact synthesis of a stationary Gaussian sequence with autocovariances
/// gamma[0..n-1] by the sequential Durbin-Levinson (Hosking) recursion. O(n^2).
inline std::vector<double> sequential_gaussian(const std::vector<double>& gamma, Engine& engine) {
  const std::size_t n = gamma.size();
  const std::vector<double> z = standard_normals(engine, n);
  std::vector<double> x(n), phi, prev;
  phi.reserve(n);
  prev.reserve(n);
  double v = gamma[0];
  x[0] = std::sqrt(v) * z[0];
  for (std::size_t t = 1; t < n; ++t) {
    // phi holds phi_{t-1, 1..t-1}; extend to phi_{t, 1..t}.
    double acc = gamma[t];
    for (std::size_t j = 1; j < t; ++j) acc -= phi[j - 1] * gamma[t - j];
    const double reflection = acc / v;
    prev = phi;
    for (std::size_t j = 1; j < t; ++j) phi[j - 1] = prev[j - 1] - reflection * prev[t - j - 1];
    phi.push_back(reflection);
    v *= (1.0 - reflection * reflection);
    if (!(v > 0.0)) throw NumericError("covariance recursion lost positive definiteness");
    double mean = 0.0;
    for (std::size_t j = 1; j <= t; ++j) mean += phi[j - 1] * x[t - j];
    x[t] = mean + std::sqrt(v) * z[t];
  }
  return x;
}

/// Circulant-embedding synthesis of n values from autocovariances gamma[0..n];
/// nullopt when the embedding has a negative eigenvalue.
inline std::optional<std::vector<double>> circulant_gaussian(const std::vector<double>& gamma, Engine& engine) {
  const std::size_t n = gamma.size() - 1;
  const std::vector<double> eig = circulant_eigenvalues(gamma);
  const double top = *std::max_element(eig.begin(), eig.end());
  const double floor = -1e-10 * top;
  for (double e : eig)
    if (e < floor) return std::nullopt;
  const std::size_t m = eig.size();
  const std::vector<double> z = standard_normals(engine, 2 * m);
  std::vector<std::complex<double>> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double scale = std::sqrt(std::max(eig[k], 0.0) / static_cast<double>(m));
    w[k] = {scale * z[2 * k], scale * z[2 * k + 1]};
  }
  detail::forward_dft(w);
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = w[j].real();
  return x;
}

/// n values of a stationary Gaussian sequence; gamma must hold lags 0..n.
/// Automatic tries the circulant embedding and falls back to the recursion.
inline GaussianDraw stationary_gaussian(const std::vector<double>& gamma, Engine& engine, Synthesis method) {
  if (gamma.size() < 2) throw ParameterError("need autocovariances for at least lags 0 and 1");
  if (method != Synthesis::Sequential) {
    if (auto x = circulant_gaussian(gamma, engine)) return {std::move(*x), Synthesis::Circulant};
    if (method == Synthesis::Circulant) throw NumericError("circulant embedding is not nonnegative definite");
  }
  std::vector<double> head(gamma.begin(), gamma.end() - 1);
  return {sequential_gaussian(head, engine), Synthesis::Sequential};
}

/// Fractional Gaussian noise on the grid's finest cells: increments of fBm with
/// covariance gamma(m) * dx^{2H}.
inline std::vector<double> generate_fgn(const Grid& grid, double hurst, std::uint64_t seed,
                                        Synthesis method = Synthesis::Automatic) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError("Hurst index must lie in (0, 1)");
  Engine engine = make_engine(seed);
  GaussianDraw draw = stationary_gaussian(fgn_autocovariances(grid.cells() + 1, hurst), engine, method);
  const double scale = std::pow(grid.dx(), hurst);
  for (double& x : draw.values) x *= scale;
  return std::move(draw.values);
}

inline StochasticMeasureSample generate_bm(const Grid& grid, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  std::vector<double> inc = standard_normals(engine, grid.cells());
  const double sd = std::sqrt(grid.dx());
  for (double& x : inc) x *= sd;
  return StochasticMeasureSample(grid, std::move(inc));
}

/// X(t) = int_a^t g(s) dW(s), g evaluated at cell midpoints.
inline StochasticMeasureSample generate_martingale(const Grid& grid, const WeightFunction& g, std::uint64_t seed) {
  const StochasticMeasureSample bm = generate_bm(grid, seed);
  std::vector<double> inc(bm.increments().begin(), bm.increments().end());
  for (std::size_t k = 0; k < inc.size(); ++k) inc[k] *= g(grid.midpoint(k));
  return StochasticMeasureSample(grid, std::move(inc));
}

/// mu(A) = int f 1_A dW^H for H > 1/2, f evaluated at cell midpoints.
inline StochasticMeasureSample generate_weighted_fbm_measure(const Grid& grid, const WeightFunction& f, double hurst,
                                                             std::uint64_t seed,
                                                             Synthesis method = Synthesis::Automatic) {
  if (!(hurst > 0.5 && hurst < 1.0))
    throw ParameterError("weighted fBm measure requires 1/2 < H < 1, got H = " + std::to_string(hurst));
  std::vector<double> inc = generate_fgn(grid, hurst, seed, method);
  for (std::size_t k = 0; k < inc.size(); ++k) inc[k] *= f(grid.midpoint(k));
  return StochasticMeasureSample(grid, std::move(inc));
}

enum class Process { BrownianMotion, WeightedMartingale, FractionalBM, WeightedFbmMeasure };

inline std::string process_name(Process p) {
  switch (p) {
    case Process::BrownianMotion: return "bm";
    case Process::WeightedMartingale: return "martingale";
    case Process::FractionalBM: return "fbm";
    case Process::WeightedFbmMeasure: return "wfbm";
  }
  return {};
}

inline Process process_from_name(const std::string& name) {
  if (name == "bm") return Process::BrownianMotion;
  if (name == "martingale") return Process::WeightedMartingale;
  if (name == "fbm") return Process::FractionalBM;
  if (name == "wfbm") return Process::WeightedFbmMeasure;
  throw ConfigurationError("unknown process '" + name + "' (expected bm, martingale, fbm, wfbm)");
}

/// Full description of a generator; generate(spec) is a pure function of it.
struct GeneratorSpec {
  Process process = Process::BrownianMotion;
  Grid grid{0.0, 1.0, 10};
  std::uint64_t seed = 0;
  double hurst = 0.5;
  WeightFunction weight = WeightFunction::constant(1.0);

  void validate() const {
    if (process == Process::FractionalBM && !(hurst > 0.0 && hurst < 1.0))
      throw ParameterError("fbm requires 0 < H < 1");
    if (process == Process::WeightedFbmMeasure && !(hurst > 0.5 && hurst < 1.0))
      throw ParameterError("wfbm requires 1/2 < H < 1, got H = " + std::to_string(hurst));
  }

  /// Plain fBm with H <= 1/2 lies outside the weighted-measure hypothesis.
  bool outside_guarantee() const { return process == Process::FractionalBM && hurst <= 0.5; }

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

inline StochasticMeasureSample generate(const GeneratorSpec& spec, std::uint64_t seed) {
  spec.validate();
  switch (spec.process) {
    case Process::BrownianMotion: return generate_bm(spec.grid, seed);
    case Process::WeightedMartingale: return generate_martingale(spec.grid, spec.weight, seed);
    case Process::FractionalBM:
      return StochasticMeasureSample(spec.grid, generate_fgn(spec.grid, spec.hurst, seed));
    case Process::WeightedFbmMeasure:
      return generate_weighted_fbm_measure(spec.grid, spec.weight, spec.hurst, seed);
  }
  throw ConfigurationError("unhandled process");
}

inline StochasticMeasureSample generate(const GeneratorSpec& spec) { return generate(spec, spec.seed); }

}  // namespace besovlab
