#pragma once

// JSON and CSV encodings of configs and reports (schema_version 1).

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "besovlab/besov.hpp"
#include "besovlab/dyadic_criterion.hpp"
#include "besovlab/error.hpp"
#include "besovlab/generators.hpp"
#include "besovlab/harness.hpp"
#include "besovlab/io.hpp"
#include "besovlab/lemma.hpp"
#include "besovlab/version.hpp"

namespace besovlab {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

template <class T>
json optional_json(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigurationError(std::string("missing config field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("bad config field '") + key + "': " + e.what());
  }
}

template <class T>
T optional_field(const json& j, const char* key, T fallback) {
  return j.contains(key) ? required<T>(j, key) : fallback;
}

}  // namespace detail

inline std::string weight_to_string(const WeightFunction& w) {
  std::string s = w.name() + ":";
  for (std::size_t i = 0; i < w.params().size(); ++i) s += (i ? "," : "") + format_double(w.params()[i]);
  return s;
}

inline json to_json(const GeneratorSpec& spec) {
  return json{{"process", process_name(spec.process)},
              {"a", spec.grid.a()},
              {"b", spec.grid.b()},
              {"J", spec.grid.J()},
              {"seed", spec.seed},
              {"hurst", spec.hurst},
              {"weight", weight_to_string(spec.weight)}};
}

inline GeneratorSpec generator_from_json(const json& j) {
  GeneratorSpec spec;
  spec.process = process_from_name(detail::required<std::string>(j, "process"));
  try {
    spec.grid = Grid(detail::optional_field<double>(j, "a", 0.0), detail::optional_field<double>(j, "b", 1.0),
                     detail::required<int>(j, "J"));
  } catch (const ParameterError& e) {
    throw ConfigurationError(e.what());
  }
  spec.seed = detail::required<std::uint64_t>(j, "seed");
  spec.hurst = detail::optional_field<double>(j, "hurst", 0.5);
  spec.weight = WeightFunction::parse(detail::optional_field<std::string>(j, "weight", "const:1"));
  spec.validate();
  return spec;
}

inline json to_json(const ExperimentConfig& c) {
  return json{{"schema_version", kSchemaVersion}, {"generator", to_json(c.generator)}, {"p", c.p},
              {"alpha_grid", c.alpha_grid},       {"n_levels", c.n_levels},          {"replicates", c.replicates},
              {"workers", c.workers}};
}

inline ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  const int version = detail::required<int>(j, "schema_version");
  if (version != kSchemaVersion)
    throw ConfigurationError("unsupported schema_version " + std::to_string(version) + " (expected 1)");
  ExperimentConfig c;
  if (!j.contains("generator")) throw ConfigurationError("missing config field 'generator'");
  c.generator = generator_from_json(j.at("generator"));
  c.p = detail::optional_field<double>(j, "p", 2.0);
  c.alpha_grid = detail::required<std::vector<double>>(j, "alpha_grid");
  c.n_levels = detail::required<int>(j, "n_levels");
  c.replicates = detail::required<std::size_t>(j, "replicates");
  c.workers = detail::optional_field<unsigned>(j, "workers", 1u);
  c.validate();
  return c;
}

/// Config fields that do not influence results are left out of report echoes.
inline json config_echo(const ExperimentConfig& c) {
  json j = to_json(c);
  j.erase("workers");
  return j;
}

inline json to_json(const ExperimentReport& r, bool include_wall_time = true) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"alpha", row.alpha},
                    {"median_slope", detail::optional_json(row.median_slope)},
                    {"frac_conv", row.frac_converges},
                    {"frac_div", row.frac_diverges},
                    {"frac_inc", row.frac_inconclusive}});
  json meta{{"version", r.version}, {"slope_threshold", kSlopeThreshold}};
  if (include_wall_time) meta["wall_time_seconds"] = r.wall_time_seconds;
  return json{{"schema_version", kSchemaVersion},
              {"config", config_echo(r.config)},
              {"rows", rows},
              {"critical_alpha", detail::optional_json(r.critical_alpha)},
              {"meta", meta}};
}

inline void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  out << "alpha,median_slope,frac_conv,frac_div,frac_inc\n";
  for (const auto& row : r.rows)
    out << format_double(row.alpha) << ',' << (row.median_slope ? format_double(*row.median_slope) : "") << ','
        << format_double(row.frac_converges) << ',' << format_double(row.frac_diverges) << ','
        << format_double(row.frac_inconclusive) << '\n';
}

inline json to_json(const ProfileReport& r, bool include_wall_time = true) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"alpha", row.alpha},
                    {"p", row.p},
                    {"q", row.q},
                    {"median_seminorm", row.median_seminorm},
                    {"q25_seminorm", row.q25_seminorm},
                    {"q75_seminorm", row.q75_seminorm},
                    {"seminorms", row.seminorms}});
  json config = config_echo(r.config);
  config.erase("alpha_grid");
  config.erase("n_levels");
  config.erase("p");
  json meta{{"version", r.version}};
  if (include_wall_time) meta["wall_time_seconds"] = r.wall_time_seconds;
  return json{{"schema_version", kSchemaVersion}, {"config", config}, {"rows", rows}, {"meta", meta}};
}

inline json to_json(const LevelSeriesReport& r) {
  return json{{"alpha", r.alpha},
              {"p", r.p},
              {"levels", r.levels},
              {"terms", r.terms},
              {"partial_sums", r.partial_sums},
              {"fitted_log2_slope", detail::optional_json(r.fitted_log2_slope)},
              {"tail_levels", r.tail_levels},
              {"slope_threshold", kSlopeThreshold},
              {"verdict", verdict_name(r.verdict)}};
}

inline void write_series_csv(std::ostream& out, const LevelSeriesReport& r) {
  out << "n,T_n,partial_sum\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i)
    out << r.levels[i] << ',' << format_double(r.terms[i]) << ',' << format_double(r.partial_sums[i]) << '\n';
}

inline json to_json(const BesovNormReport& r) {
  return json{{"alpha", r.alpha},
              {"p", r.p},
              {"q", r.q},
              {"lp_norm", r.lp_norm},
              {"seminorm_truncated", r.seminorm_truncated},
              {"truncation_floor", r.truncation_floor},
              {"extrapolated_seminorm", detail::optional_json(r.extrapolated_seminorm)},
              {"tail_exponent", detail::optional_json(r.tail_exponent)},
              {"extrapolation_diverges", r.extrapolation_diverges},
              {"norm_total", r.norm_total},
              {"in_guaranteed_regime", r.in_guaranteed_regime}};
}

inline json to_json(const PZResult& r) {
  return json{{"probability", r.probability},
              {"bound", r.bound},
              {"pass", r.pass},
              {"standard_error", r.standard_error},
              {"evaluated", r.evaluated}};
}

inline json to_json(const std::vector<ProbeRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) out.push_back({{"family_size", row.family_size}, {"quantile", row.quantile}});
  return out;
}

inline void write_probe_csv(std::ostream& out, const std::vector<ProbeRow>& rows) {
  out << "family_size,quantile\n";
  for (const auto& row : rows) out << row.family_size << ',' << format_double(row.quantile) << '\n';
}

}  // namespace besovlab
