// Command-line front end: one subcommand per experiment, a JSON config as
// the source of truth, and flag overrides for the common numeric knobs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "husimi/config.hpp"
#include "husimi/errors.hpp"
#include "husimi/experiments.hpp"
#include "husimi/io.hpp"
#include "husimi/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw husimi::IoError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  int workers = 0;
  double dt = 0.0;
  int fock_dim = 0;
  int lattice_size = 0;
};

int run(const std::string& experiment, const CliOverrides& cli) {
  husimi::RunConfig cfg = husimi::parse_config(read_file(cli.config_path));
  cfg.experiment = husimi::experiment_from_name(experiment);
  if (!cfg.times_explicit) {
    cfg.times.clear();  // re-derive the defaults for the chosen experiment
    cfg.apply_time_defaults();
  }

  if (!cli.out_dir.empty()) cfg.output_dir = cli.out_dir;
  if (const char* env = std::getenv("HUSIMI_DYN_OUT"); env && *env) cfg.output_dir = env;
  if (cli.workers > 0) cfg.workers = cli.workers;
  if (cli.dt > 0.0) cfg.numeric.dt = cli.dt;
  if (cli.fock_dim > 0) cfg.numeric.fock_dim = cli.fock_dim;
  if (cli.lattice_size > 0) cfg.numeric.lattice_size = cli.lattice_size;

  husimi::RunManifest manifest;
  manifest.version = husimi::kVersion;
  manifest.config_echo = husimi::config_echo(cfg);

  const std::filesystem::path manifest_path =
      std::filesystem::path(cfg.output_dir) / "manifest.json";

  int exit_code = kExitOk;
  try {
    const husimi::ExperimentOutcome outcome = husimi::run_experiment(cfg, manifest);
    manifest.success = outcome.rows_failed == 0;
    manifest.diagnostics["rows_requested"] = std::to_string(outcome.rows_requested);
    manifest.diagnostics["rows_failed"] = std::to_string(outcome.rows_failed);
    if (outcome.rows_failed > 0) exit_code = kExitGuard;
  } catch (const husimi::ConfigError& e) {
    manifest.failure = e.what();
    std::cerr << e.what() << "\n";
    exit_code = kExitConfig;
  } catch (const husimi::GuardError& e) {
    manifest.failure = e.what();
    std::cerr << e.what() << "\n";
    exit_code = kExitGuard;
  } catch (const husimi::IoError& e) {
    manifest.failure = e.what();
    std::cerr << e.what() << "\n";
    exit_code = kExitIo;
  } catch (const std::exception& e) {
    manifest.failure = e.what();
    std::cerr << e.what() << "\n";
    exit_code = kExitGuard;
  }

  try {
    husimi::write_manifest(manifest, manifest_path);
  } catch (const std::exception& e) {
    std::cerr << "manifest write failed: " << e.what() << "\n";
    if (exit_code == kExitOk) exit_code = kExitIo;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasiperiodic lattice, quantum Husimi, and semiclassical Husimi dynamics"};
  app.set_version_flag("--version", husimi::kVersion);
  app.require_subcommand(1);

  CliOverrides cli;
  const std::vector<std::string> experiments = {"lattice", "qhusimi", "chusimi", "portrait",
                                                "critical", "vsweep", "compare", "purity"};
  const std::vector<std::string> descriptions = {
      "lattice wavepacket transport (sigma^2, velocity)",
      "quantum Husimi fields and variance series",
      "semiclassical Husimi fields and variance series",
      "classical phase-portrait trajectories",
      "fixed points, analytic and bracketed critical potentials",
      "velocity-vs-V sweep across the three engines",
      "sigma^2(t) comparison across the three engines",
      "purity and sigma^2 time scan",
  };

  std::string chosen;
  for (size_t k = 0; k < experiments.size(); ++k) {
    CLI::App* sub = app.add_subcommand(experiments[k], descriptions[k]);
    sub->add_option("--config", cli.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", cli.out_dir, "output directory (HUSIMI_DYN_OUT overrides)");
    sub->add_option("--workers", cli.workers, "sweep worker budget");
    sub->add_option("--dt", cli.dt, "integrator step override");
    sub->add_option("--fock-dim", cli.fock_dim, "Fock truncation override");
    sub->add_option("--lattice-size", cli.lattice_size, "lattice size override (odd)");
    sub->callback([&chosen, name = experiments[k]]() { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run(chosen, cli);
  } catch (const husimi::IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const husimi::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitGuard;
  }
}
