#pragma once

#include <limits>
#include <vector>

#include "husimi/config.hpp"
#include "husimi/io.hpp"
#include "husimi/lattice.hpp"

namespace husimi {

struct VSweepRow {
  double v = 0.0;
  double v_lattice = std::numeric_limits<double>::quiet_NaN();
  double v_quantum = std::numeric_limits<double>::quiet_NaN();
  double v_classical = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> notes;  // per-engine failures, empty on success
};

struct PurityRow {
  double t = 0.0;
  double purity = std::numeric_limits<double>::quiet_NaN();
  double sigma_sq_quantum = std::numeric_limits<double>::quiet_NaN();
  double sigma_sq_classical = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentOutcome {
  int rows_requested = 0;
  int rows_failed = 0;
};

// Individual experiment drivers. Each writes its tabular outputs under
// cfg.output_dir and records timings/diagnostics into the manifest.
TransportRecord run_lattice_transport(const RunConfig& cfg, RunManifest& manifest);
std::vector<double> run_quantum_husimi(const RunConfig& cfg, RunManifest& manifest);
std::vector<double> run_classical_husimi(const RunConfig& cfg, RunManifest& manifest);
void run_phase_portrait(const RunConfig& cfg, RunManifest& manifest);
void run_critical_point(const RunConfig& cfg, RunManifest& manifest);

// One row per sweep V; failed engines leave NaN cells and a manifest note,
// the sweep continues. Rows are ordered by V and deterministic given the
// config. Sweep points run concurrently up to cfg.workers.
std::vector<VSweepRow> run_vsweep(const RunConfig& cfg, RunManifest& manifest);

void run_compare(const RunConfig& cfg, RunManifest& manifest);
std::vector<PurityRow> run_purity_scan(const RunConfig& cfg, RunManifest& manifest);

// Dispatch on cfg.experiment; returns the produced/failed row counts used
// for the CLI exit code.
ExperimentOutcome run_experiment(const RunConfig& cfg, RunManifest& manifest);

}  // namespace husimi
