// sparsemix command-line front end.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sparsemix/config.hpp"
#include "sparsemix/experiment.hpp"
#include "sparsemix/selftest.hpp"

namespace fs = std::filesystem;
using namespace sparsemix;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out_dir;
};

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config_path.empty() ? parse_config("") : load_config(c.config_path);
  if (c.seed) {
    cfg.seed = *c.seed;
  }
  if (!c.out_dir.empty()) {
    cfg.output = c.out_dir;
  }
  return cfg;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << body;
  std::cerr << "wrote " << path.string() << "\n";
}

void add_common(CLI::App* sub, Common& c, bool needs_config) {
  auto* opt = sub->add_option("--config", c.config_path, "experiment config file");
  if (needs_config) {
    opt->required()->check(CLI::ExistingFile);
  }
  sub->add_option("--seed", c.seed, "master seed (overrides the config)");
  sub->add_option("--threads", c.threads, "worker threads; does not change results")
      ->check(CLI::Range(1U, 1024U));
  sub->add_option("--out", c.out_dir, "output directory (overrides the config)");
}

int cmd_rate(const Common& c) {
  const auto cfg = load(c);
  const auto result = run_rate_experiment(cfg, {c.threads});
  write_file(cfg.output, "results.csv", result.csv());
  write_file(cfg.output, "fits.json", result.fits_json());
  std::cout << "regime " << to_string(result.regime.regime) << "\n";
  for (const auto& f : result.fits) {
    std::cout << to_string(f.error) << ": ";
    if (f.verdict) {
      std::cout << (f.verdict->pass ? "PASS " : "FAIL ") << f.verdict->detail << "\n";
    } else {
      std::cout << "no verdict (" << f.skipped << ")\n";
    }
  }
  if (result.crossover.ran) {
    std::cout << "crossover at n = " << result.crossover.n << ": "
              << (result.crossover.pass() ? "PASS" : "FAIL") << "\n";
  }
  for (const auto& w : result.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return result.all_pass() ? 0 : 1;
}

int cmd_adaptive(const Common& c) {
  const auto cfg = load(c);
  const auto result = run_adaptive_comparison(cfg, {c.threads});
  write_file(cfg.output, "results.csv", result.csv());
  for (const auto& w : result.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return 0;
}

int cmd_calibrate(const Common& c) {
  const auto cfg = load(c);
  const auto result = run_calibration(cfg, {c.threads});
  write_file(cfg.output, "results.csv", calibration_csv(result));
  for (const auto& w : result.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return 0;
}

int cmd_regime_map(const Common& c) {
  auto cfg = load(c);
  if (cfg.beta_grid.empty() || cfg.r_grid.empty()) {
    throw ConfigError("regime-map needs beta_grid and r_grid");
  }
  const auto rows = emit_regime_map(cfg.beta_grid, cfg.r_grid, cfg.scaling);
  write_file(cfg.output, "regime_map.csv", regime_map_csv(rows));
  return 0;
}

int cmd_selftest(const Common& c) {
  bool ok = true;
  for (const auto& check : run_selftest(c.threads)) {
    std::cout << (check.pass ? "PASS " : "FAIL ") << check.name;
    if (!check.detail.empty()) {
      std::cout << "  [" << check.detail << "]";
    }
    std::cout << "\n";
    ok = ok && check.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Gaussian mixture detection experiments"};
  app.require_subcommand(1);

  Common common;
  auto* rate = app.add_subcommand("rate", "error-rate scaling of the oracle likelihood ratio test");
  auto* adaptive = app.add_subcommand("adaptive", "miss detection of calibrated tests");
  auto* regime = app.add_subcommand("regime-map", "classify a (beta, r) grid");
  auto* calibrate = app.add_subcommand("calibrate", "threshold calibration table");
  auto* selftest = app.add_subcommand("selftest", "check the library against reference values");
  add_common(rate, common, true);
  add_common(adaptive, common, true);
  add_common(regime, common, true);
  add_common(calibrate, common, true);
  add_common(selftest, common, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (rate->parsed()) return cmd_rate(common);
    if (adaptive->parsed()) return cmd_adaptive(common);
    if (regime->parsed()) return cmd_regime_map(common);
    if (calibrate->parsed()) return cmd_calibrate(common);
    if (selftest->parsed()) return cmd_selftest(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
