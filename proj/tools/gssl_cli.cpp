// gssl: generate datasets, run the Monte Carlo experiments, inspect outputs.
//
// Exit codes: 0 success, 1 experiment-level failure, 2 usage or config error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "gssl/gssl.hpp"
#include "gssl/runtime.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

const std::vector<std::string> kExperiments{"bandwidth", "bandwidth-sweep", "reconstruction", "cut", "esd"};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("gssl");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("GSSL_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> threads;
};

gssl::ExperimentConfig load_with_overrides(const std::string& path, const Overrides& o) {
  nlohmann::json j = gssl::read_json_file(path);
  if (j.is_object()) {
    if (o.seed) j["base_seed"] = *o.seed;
    if (o.reps) j["repetitions"] = *o.reps;
    if (o.threads) j["threads"] = *o.threads;
  }
  return gssl::config_from_json(j);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

nlohmann::json manifest(const std::string& command, const gssl::ExperimentConfig& cfg,
                        const std::vector<std::string>& artifacts, double wall_seconds) {
  return {{"kind", "gssl-manifest"},
          {"schema_version", gssl::kResultSchemaVersion},
          {"tool_version", kToolVersion},
          {"command", command},
          {"seed", cfg.base_seed},
          {"config", gssl::config_to_json(cfg)},
          {"artifacts", artifacts},
          {"timings", {{"wall_seconds", wall_seconds}}}};
}

int cmd_generate(const std::string& config_path, const std::string& out_path, const Overrides& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const gssl::ExperimentConfig cfg = load_with_overrides(config_path, o);
  spdlog::info("sampling {} points from {} (seed {})", cfg.n, cfg.model_name, cfg.base_seed);
  gssl::Dataset data = gssl::sample(cfg.model, cfg.n, cfg.base_seed);
  gssl::write_text_file(out_path, gssl::dataset_to_csv(data));
  const std::string sidecar = out_path + ".manifest.json";
  gssl::write_text_file(sidecar, manifest("generate", cfg, {out_path}, seconds_since(t0)).dump(2) + "\n");
  std::cout << "wrote " << out_path << " (" << data.size() << " rows)\n";
  return kExitOk;
}

gssl::ExperimentResult dispatch(const std::string& experiment, const gssl::ExperimentConfig& cfg) {
  if (experiment == "bandwidth" || experiment == "bandwidth-sweep") {
    gssl::ExperimentConfig c = cfg;
    if (experiment == "bandwidth-sweep" && c.n_sweep.empty()) c.n_sweep = {500, 1000, 2000};
    if (experiment == "bandwidth") c.n_sweep.clear();
    return gssl::run_bandwidth_experiment(c);
  }
  if (experiment == "reconstruction") return gssl::run_reconstruction_experiment(cfg);
  if (experiment == "cut") return gssl::run_cut_convergence(cfg);
  return gssl::run_esd_experiment(cfg);
}

int cmd_run(const std::string& experiment, const std::string& config_path, const std::string& out_dir,
            const Overrides& o) {
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end()) {
    std::cerr << "error: unknown experiment '" << experiment << "' (valid: " << gssl::join_names(kExperiments)
              << ")\n";
    return kExitUsage;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const gssl::ExperimentConfig cfg = load_with_overrides(config_path, o);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw gssl::Error(gssl::ErrorKind::Io, "cannot create '" + out_dir + "': " + ec.message());
  spdlog::info("running {} with {} repetitions", experiment, cfg.repetitions);
  const gssl::ExperimentResult result = dispatch(experiment, cfg);
  const double compute_seconds = seconds_since(t0);

  const fs::path dir(out_dir);
  const std::vector<std::string> artifacts{(dir / "results.json").string(), (dir / "results.csv").string(),
                                           (dir / "fig.svg").string()};
  gssl::write_text_file(artifacts[0], gssl::result_to_json(result, cfg).dump(2) + "\n");
  gssl::write_text_file(artifacts[1], gssl::result_to_csv(result));
  gssl::write_text_file(artifacts[2], gssl::render_svg(gssl::figure_for(result)));
  nlohmann::json m = manifest("run " + experiment, cfg, artifacts, seconds_since(t0));
  m["timings"]["compute_seconds"] = compute_seconds;
  m["failed_repetitions"] = result.failed_count();
  gssl::write_text_file((dir / "manifest.json").string(), m.dump(2) + "\n");

  for (const auto& rec : result.repetitions)
    if (rec.failed) spdlog::warn("repetition {} (n={}) failed: {}", rec.index, rec.n, rec.error);
  if (result.failed(cfg.max_failure_fraction)) {
    std::cerr << "error: " << result.failed_count() << " of " << result.repetitions.size()
              << " repetitions failed; partial results kept in " << out_dir << "\n";
    return kExitFailure;
  }
  std::cout << "wrote " << out_dir << "\n";
  return kExitOk;
}

void print_result(const gssl::ExperimentResult& r) {
  std::cout << "experiment: " << r.experiment << "\n";
  std::cout << "repetitions: " << r.repetitions.size() << " (" << r.failed_count() << " failed)\n";
  for (const auto& [k, v] : r.references) std::cout << "reference " << k << ": " << gssl::format_double(v) << "\n";
  std::cout << "signal,abscissa,mean,std,reference\n";
  for (const auto& s : r.series)
    std::cout << s.signal << "," << gssl::format_double(s.abscissa) << "," << gssl::format_double(s.mean) << ","
              << gssl::format_double(s.stddev) << "," << gssl::format_double(s.reference) << "\n";
}

int cmd_inspect(const std::string& path) {
  const std::string text = gssl::read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw gssl::Error(gssl::ErrorKind::Schema, "'" + path + "' is not valid JSON: " + e.what());
    }
    const std::string kind = j.is_object() ? j.value("kind", std::string()) : std::string();
    if (kind == "gssl-result") {
      print_result(gssl::result_from_json(j));
      return kExitOk;
    }
    if (kind == "gssl-manifest") {
      std::cout << "manifest: " << j.value("command", std::string()) << "\n";
      std::cout << "seed: " << j.value("seed", std::uint64_t{0}) << "\n";
      for (const auto& a : j.value("artifacts", nlohmann::json::array())) std::cout << "artifact: " << a.get<std::string>() << "\n";
      return kExitOk;
    }
    throw gssl::Error(gssl::ErrorKind::Schema, "'" + path + "' has an unknown JSON schema");
  }
  const gssl::Dataset data = gssl::dataset_from_csv(text);
  std::size_t ones = 0;
  for (auto v : data.indicator) ones += v;
  std::cout << "n=" << data.size() << "\n";
  std::cout << "d=" << data.dim() << "\n";
  std::cout << "class balance: " << ones << " labeled 1, " << data.size() - ones << " labeled 0\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  gssl::ensure_blas_kernels(argv);
  setup_logging();
  CLI::App app{"Graph-based semi-supervised learning experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Overrides o;
  std::string config_path, out_path, experiment, inspect_path;

  auto* gen = app.add_subcommand("generate", "sample a dataset from a model config");
  gen->add_option("--config", config_path, "config file")->required();
  gen->add_option("--out", out_path, "output CSV path")->required();
  gen->add_option("--seed", o.seed, "override base_seed");

  auto* run = app.add_subcommand("run", "run an experiment");
  run->add_option("experiment", experiment, "one of: " + gssl::join_names(kExperiments))->required();
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_path, "output directory")->required();
  run->add_option("--seed", o.seed, "override base_seed");
  run->add_option("--reps", o.reps, "override repetitions");
  run->add_option("--threads", o.threads, "worker threads");

  auto* inspect = app.add_subcommand("inspect", "summarize a dataset or result file");
  inspect->add_option("path", inspect_path, "dataset CSV or results JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(config_path, out_path, o);
    if (run->parsed()) return cmd_run(experiment, config_path, out_path, o);
    return cmd_inspect(inspect_path);
  } catch (const gssl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == gssl::ErrorKind::Numerical ? kExitFailure : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
