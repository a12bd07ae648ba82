// besovlab command-line entry point.
//
// Exit codes: 0 success, 2 usage/parameter/configuration error,
// 3 data, resolution or I/O error, 4 numeric failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "besovlab/besovlab.hpp"

namespace fs = std::filesystem;
using namespace besovlab;

namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

/// Writes atomically: a partially written file never appears under the final name.
void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content << std::flush;
    return;
  }
  const fs::path target(out);
  const fs::path tmp = target.string() + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot move output into place at '" + out + "': " + ec.message());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(item);
    if (!v || !std::isfinite(*v)) throw ParameterError("'" + item + "' is not a finite number");
    out.push_back(*v);
  }
  if (out.empty()) throw ParameterError("empty number list");
  return out;
}

struct Ingested {
  IngestResult result;
  std::string input;
};

Ingested load_path(const std::string& input, std::optional<int> J) {
  std::ifstream in(input);
  if (!in) throw IoError("cannot open input '" + input + "'");
  return {ingest(read_series_csv(in), J), input};
}

json ingest_json(const Ingested& x) {
  return json{{"input", x.input},
              {"raw_points", x.result.raw_points},
              {"resampled", x.result.resampled},
              {"J", x.result.path.grid().J()},
              {"a", x.result.path.grid().a()},
              {"b", x.result.path.grid().b()}};
}

// Generator flags shared by generate and lemma.
struct GeneratorFlags {
  std::string process = "bm";
  double hurst = 0.5;
  std::string weight = "const:1";
  double a = 0.0;
  double b = 1.0;
  int J = 12;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--process", process, "bm | martingale | fbm | wfbm")->capture_default_str();
    app->add_option("--H", hurst, "Hurst index (fbm, wfbm)")->capture_default_str();
    app->add_option("--weight", weight, "const:c | affine:c0,c1 | sine:amp,freq[,phase] | indicator:lo,hi")
        ->capture_default_str();
    app->add_option("--a", a, "left end of the interval")->capture_default_str();
    app->add_option("--b", b, "right end of the interval")->capture_default_str();
    app->add_option("--J", J, "dyadic resolution, 2^J + 1 grid points")->capture_default_str();
    app->add_option("--seed", seed, "64-bit unsigned seed")->capture_default_str();
  }

  GeneratorSpec spec() const {
    GeneratorSpec s;
    s.process = process_from_name(process);
    s.grid = Grid(a, b, J);
    s.seed = seed;
    s.hurst = hurst;
    s.weight = WeightFunction::parse(weight);
    s.validate();
    return s;
  }
};

void warn_outside_guarantee(const GeneratorSpec& spec) {
  if (spec.outside_guarantee())
    std::cerr << "warning: fbm with H <= 1/2 lies outside the weighted-measure hypothesis\n";
}

// ---------------------------------------------------------------------------

struct GenerateCmd {
  GeneratorFlags gen;
  std::string out;

  void run() const {
    const GeneratorSpec spec = gen.spec();
    warn_outside_guarantee(spec);
    const SampledPath path = path_of(generate(spec));
    std::ostringstream csv;
    write_path_csv(csv, path);
    if (!out.empty() && out != "-") {
      const fs::path sidecar = fs::path(out).replace_extension(".json");
      if (sidecar == fs::path(out)) throw ParameterError("--out must not end in .json; the sidecar uses that name");
      emit(sidecar.string(), dump(json{{"schema_version", kSchemaVersion},
                                       {"generator", to_json(spec)},
                                       {"seed", spec.seed},
                                       {"outside_guarantee", spec.outside_guarantee()},
                                       {"points", path.size()},
                                       {"data", fs::path(out).filename().string()},
                                       {"version", kVersion}}));
    }
    emit(out, csv.str());
  }
};

struct DyadicCmd {
  std::string input;
  double alpha = 0.0;
  double p = 2.0;
  int N = 12;
  std::optional<int> J;
  std::string format = "json";
  std::string out;

  void run() const {
    const Ingested data = load_path(input, J);
    const int resolution = data.result.path.grid().J();
    if (N > resolution)
      throw ResolutionError("N = " + std::to_string(N) + " exceeds the input resolution J = " +
                            std::to_string(resolution) + " (use --J to resample finer)");
    const LevelSeriesReport report = kamont_series(data.result.path, N, alpha, p);
    if (format == "csv") {
      std::ostringstream csv;
      write_series_csv(csv, report);
      emit(out, csv.str());
    } else {
      json j = to_json(report);
      j["ingest"] = ingest_json(data);
      j["version"] = kVersion;
      emit(out, dump(j));
    }
  }
};

struct BesovCmd {
  std::string input;
  double alpha = 0.0;
  double p = 2.0;
  std::optional<double> q;
  bool extrapolate = false;
  std::optional<int> J;
  unsigned workers = 1;
  std::string format = "json";
  std::string out;

  void run() const {
    const Ingested data = load_path(input, J);
    const BesovParams params(alpha, p, q.value_or(p));
    const BesovNormReport report =
        besov_norm(data.result.path, params, {.extrapolate = extrapolate, .workers = workers});
    json j = to_json(report);
    if (format == "csv") {
      // One header line and one data row; absent values are empty cells.
      std::string header, row;
      for (const auto& [key, value] : j.items()) {
        const char* sep = header.empty() ? "" : ",";
        header += sep + key;
        row += sep;
        if (value.is_number_float()) row += format_double(value.get<double>());
        else if (!value.is_null()) row += value.dump();
      }
      emit(out, header + "\n" + row + "\n");
    } else {
      j["ingest"] = ingest_json(data);
      j["version"] = kVersion;
      emit(out, dump(j));
    }
  }
};

struct SweepCmd {
  std::string config;
  std::string out;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;

  void run() const {
    std::ifstream in(config);
    if (!in) throw IoError("cannot open config '" + config + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c = config_from_json(j);
    if (workers) c.workers = *workers;
    if (seed) c.generator.seed = *seed;
    warn_outside_guarantee(c.generator);
    const ExperimentReport report = run_alpha_sweep(c);
    std::ostringstream csv;
    write_report_csv(csv, report);
    emit(out + ".json", dump(to_json(report)));
    emit(out + ".csv", csv.str());
  }
};

struct LemmaCmd {
  std::string pz_exact;
  std::string pz_mc;
  std::uint64_t samples = 100000;
  bool statistic = false;
  bool probe = false;
  GeneratorFlags gen;
  double alpha = 0.4;
  double p = 2.0;
  int N = 12;
  std::string sizes = "4,16,64,256,1024";
  std::size_t replicates = 500;
  double quantile = 0.99;
  std::string family = "random";
  std::string coefficients = "uniform";
  unsigned workers = 1;
  std::string format = "json";
  std::string out;

  void run(const CLI::App& app) const {
    const int modes = !pz_exact.empty() + !pz_mc.empty() + statistic + probe;
    if (modes != 1) throw ParameterError("choose exactly one of --pz-exact, --pz-mc, --statistic, --probe");
    if (!pz_exact.empty() || !pz_mc.empty()) return run_pz();
    if (statistic) return run_statistic(app);
    run_probe();
  }

  void run_pz() const {
    const bool exact = !pz_exact.empty();
    const auto lambdas = parse_list(exact ? pz_exact : pz_mc);
    const PZResult r = paley_zygmund_check(lambdas, exact ? PZMode::exact(workers) : PZMode::monte_carlo(samples, gen.seed));
    const std::string verdict = r.pass ? "PASS" : "FAIL";
    if (format == "csv") {
      emit(out, "probability,bound,result,standard_error,evaluated\n" + format_double(r.probability) + "," +
                    format_double(r.bound) + "," + verdict + "," + format_double(r.standard_error) + "," +
                    std::to_string(r.evaluated) + "\n");
    } else {
      json j = to_json(r);
      j["mode"] = exact ? "exact" : "monte_carlo";
      j["result"] = verdict;
      emit(out, dump(j));
    }
  }

  void run_statistic(const CLI::App& app) const {
    GeneratorFlags flags = gen;
    if (app.count("--J") == 0) flags.J = N;
    const GeneratorSpec spec = flags.spec();
    warn_outside_guarantee(spec);
    if (N > spec.grid.J())
      throw ResolutionError("family depth N = " + std::to_string(N) + " exceeds J = " + std::to_string(spec.grid.J()));
    const auto weights = WeightSequence::geometric(alpha, p, N);
    const auto sums = lemma_statistic(generate(spec), weights, DisjointFamily::full_dyadic(N));
    if (format == "csv") {
      std::string csv = "n,a_n,partial_sum\n";
      for (int n = 1; n <= N; ++n)
        csv += std::to_string(n) + "," + format_double(weights(n)) + "," + format_double(sums[n - 1]) + "\n";
      emit(out, csv);
    } else {
      emit(out, dump(json{{"generator", to_json(spec)},
                          {"alpha", alpha},
                          {"p", p},
                          {"weights", weights.values()},
                          {"summable", weights.summable()},
                          {"summability_margin", weights.summable() ? json(weights.summability_margin()) : json(nullptr)},
                          {"partial_sums", sums},
                          {"version", kVersion}}));
    }
  }

  void run_probe() const {
    const GeneratorSpec spec = gen.spec();
    warn_outside_guarantee(spec);
    std::vector<std::size_t> family_sizes;
    for (double s : parse_list(sizes)) {
      if (!(s >= 1.0) || s != std::floor(s)) throw ParameterError("family sizes must be positive integers");
      family_sizes.push_back(static_cast<std::size_t>(s));
    }
    ProbeOptions options;
    options.family = family == "dyadic" ? ProbeOptions::Family::DyadicPartition : ProbeOptions::Family::RandomGroups;
    options.coefficients = coefficients == "ones"    ? ProbeOptions::Coefficients::Ones
                           : coefficients == "zeros" ? ProbeOptions::Coefficients::Zeros
                                                     : ProbeOptions::Coefficients::Uniform;
    options.workers = workers;
    const auto rows = boundedness_probe(spec, family_sizes, replicates, quantile, options);
    if (format == "csv") {
      std::ostringstream csv;
      write_probe_csv(csv, rows);
      emit(out, csv.str());
    } else {
      emit(out, dump(json{{"generator", to_json(spec)},
                          {"replicates", replicates},
                          {"quantile", quantile},
                          {"family", family},
                          {"coefficients", coefficients},
                          {"rows", to_json(rows)},
                          {"version", kVersion}}));
    }
  }
};

void add_format(CLI::App* app, std::string& format) {
  app->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ResolutionError*>(&e) || dynamic_cast<const DataError*>(&e) ||
      dynamic_cast<const IoError*>(&e))
    return 3;
  if (dynamic_cast<const NumericError*>(&e)) return 4;
  if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const ConfigurationError*>(&e) ||
      dynamic_cast<const SizeError*>(&e))
    return 2;
  if (dynamic_cast<const std::bad_alloc*>(&e)) return 4;
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"besovlab: Besov regularity of stochastic-measure paths"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  GenerateCmd generate_cmd;
  auto* gen = app.add_subcommand("generate", "sample a path; writes CSV (t,value) and a JSON sidecar");
  generate_cmd.gen.attach(gen);
  gen->add_option("--out", generate_cmd.out, "output CSV (stdout if omitted)");

  DyadicCmd dyadic_cmd;
  auto* dy = app.add_subcommand("dyadic", "dyadic level series and convergence verdict");
  dy->add_option("--input", dyadic_cmd.input, "CSV path (t,value)")->required();
  dy->add_option("--alpha", dyadic_cmd.alpha, "smoothness index in (0,1)")->required();
  dy->add_option("--p", dyadic_cmd.p, "integrability exponent")->capture_default_str();
  dy->add_option("--N", dyadic_cmd.N, "number of levels (>= 6)")->capture_default_str();
  dy->add_option("--J", dyadic_cmd.J, "resample the input at this resolution");
  add_format(dy, dyadic_cmd.format);
  dy->add_option("--out", dyadic_cmd.out, "output file (stdout if omitted)");

  BesovCmd besov_cmd;
  auto* bs = app.add_subcommand("besov", "Besov norm via the L_p modulus of continuity");
  bs->add_option("--input", besov_cmd.input, "CSV path (t,value)")->required();
  bs->add_option("--alpha", besov_cmd.alpha, "smoothness index in (0,1)")->required();
  bs->add_option("--p", besov_cmd.p, "integrability exponent")->capture_default_str();
  bs->add_option("--q", besov_cmd.q, "outer exponent (default: p)");
  bs->add_flag("--extrapolate", besov_cmd.extrapolate, "add a power-law tail below the grid spacing");
  bs->add_option("--J", besov_cmd.J, "resample the input at this resolution");
  bs->add_option("--workers", besov_cmd.workers, "worker threads")->capture_default_str();
  add_format(bs, besov_cmd.format);
  bs->add_option("--out", besov_cmd.out, "output file (stdout if omitted)");

  SweepCmd sweep_cmd;
  auto* sw = app.add_subcommand("sweep", "alpha sweep from a JSON config; writes <out>.json and <out>.csv");
  sw->add_option("--config", sweep_cmd.config, "experiment config (schema_version 1)")->required();
  sw->add_option("--out", sweep_cmd.out, "output prefix")->required();
  sw->add_option("--workers", sweep_cmd.workers, "override the config worker count");
  sw->add_option("--seed", sweep_cmd.seed, "override the master seed");

  LemmaCmd lemma_cmd;
  auto* lm = app.add_subcommand("lemma", "quadratic statistic, Paley-Zygmund check, boundedness probe");
  lm->add_option("--pz-exact", lemma_cmd.pz_exact, "comma-separated coefficients, exact enumeration (<= 20)");
  lm->add_option("--pz-mc", lemma_cmd.pz_mc, "comma-separated coefficients, Monte Carlo");
  lm->add_option("--samples", lemma_cmd.samples, "Monte Carlo samples")->capture_default_str();
  lm->add_flag("--statistic", lemma_cmd.statistic, "weighted quadratic statistic over full dyadic families");
  lm->add_flag("--probe", lemma_cmd.probe, "quantiles of |sum c_k mu(A_k)| by family size");
  lemma_cmd.gen.attach(lm);
  lm->add_option("--alpha", lemma_cmd.alpha, "alpha in a_n = 2^{n(alpha p - 1)/2}")->capture_default_str();
  lm->add_option("--p", lemma_cmd.p, "p in a_n")->capture_default_str();
  lm->add_option("--N", lemma_cmd.N, "family depth (default J = N)")->capture_default_str();
  lm->add_option("--sizes", lemma_cmd.sizes, "probe family sizes")->capture_default_str();
  lm->add_option("--replicates", lemma_cmd.replicates, "probe replicates")->capture_default_str();
  lm->add_option("--quantile", lemma_cmd.quantile, "probe quantile level")->capture_default_str();
  lm->add_option("--family", lemma_cmd.family, "random | dyadic")
      ->check(CLI::IsMember({"random", "dyadic"}))
      ->capture_default_str();
  lm->add_option("--coefficients", lemma_cmd.coefficients, "uniform | ones | zeros")
      ->check(CLI::IsMember({"uniform", "ones", "zeros"}))
      ->capture_default_str();
  lm->add_option("--workers", lemma_cmd.workers, "worker threads")->capture_default_str();
  add_format(lm, lemma_cmd.format);
  lm->add_option("--out", lemma_cmd.out, "output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) generate_cmd.run();
    else if (*dy) dyadic_cmd.run();
    else if (*bs) besov_cmd.run();
    else if (*sw) sweep_cmd.run();
    else if (*lm) lemma_cmd.run(*lm);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
