#pragma once

#include <optional>
#include <string>
#include <vector>

#include "husimi/model.hpp"
#include "husimi/phase_space.hpp"

namespace husimi {

enum class Experiment {
  LatticeTransport,
  QuantumHusimi,
  ClassicalHusimi,
  PhasePortrait,
  CriticalPoint,
  VSweep,
  Compare,
  PurityScan,
};

const char* experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct SweepSpec {
  std::string parameter = "v";
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;
};

struct NumericSettings {
  double dt = 0.01;        // lattice / quantum integrator step
  double char_dt = 1e-3;   // backward-characteristic step
  int fock_dim = 300;
  int lattice_size = 601;
};

struct EngineToggles {
  bool lattice = true;
  bool quantum = true;
  bool classical = true;
};

struct RunConfig {
  ModelParams model = ModelParams::model_i(1.0, 0.5, 0.5, 0.6180339887498949);
  Experiment experiment = Experiment::LatticeTransport;
  PhaseSpaceGrid grid;
  std::vector<double> times;       // defaulted per experiment/model when empty
  std::optional<SweepSpec> sweep;
  std::string output_dir = "out";
  NumericSettings numeric;
  EngineToggles engines;
  int workers = 2;
  double quantum_vc = 1.0;         // target for the special-beta inversion
  std::vector<PhasePoint> portrait_starts;
  bool times_explicit = false;     // true when the document listed `times`

  // Fills `times` (and the portrait horizon) when the user left them empty.
  void apply_time_defaults();
};

// Parses and validates a JSON run-configuration document. Unknown keys and
// invalid values raise ConfigError naming the field. Model defaults:
// Model I J_L = 1, J_R = 1/2; Model II / AA J = 1; beta = (sqrt(5)-1)/2.
RunConfig parse_config(const std::string& text);

// Normalized JSON echo of a config (used in manifests; deterministic).
std::string config_echo(const RunConfig& cfg);

}  // namespace husimi
