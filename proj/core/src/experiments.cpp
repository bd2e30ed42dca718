#include "husimi/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "husimi/continuum.hpp"
#include "husimi/errors.hpp"
#include "husimi/phase_analysis.hpp"
#include "husimi/semiclassical.hpp"
#include "husimi/version.hpp"

namespace husimi {

namespace {

namespace fs = std::filesystem;

class StageTimer {
 public:
  StageTimer(RunManifest& manifest, std::string name)
      : manifest_(manifest), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto end = std::chrono::steady_clock::now();
    manifest_.stages.push_back({name_, std::chrono::duration<double>(end - start_).count()});
  }

 private:
  RunManifest& manifest_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = lo + (hi - lo) * k / (n - 1);
  return out;
}

// Quantum Husimi fields over the config grid with the boundary-mass
// auto-expansion: if the outer node ring carries more than 1e-4 of the
// mass the grid is scaled 1.5x (twice at most) and the fields recomputed.
struct QuantumFieldSeries {
  std::vector<HusimiField> fields;
  PhaseSpaceGrid grid;
  int expansions = 0;
};

QuantumFieldSeries quantum_fields(const std::vector<Eigen::VectorXcd>& states,
                                  const std::vector<double>& times, PhaseSpaceGrid grid) {
  QuantumFieldSeries out;
  out.grid = grid;
  for (int attempt = 0;; ++attempt) {
    out.fields.clear();
    for (size_t k = 0; k < states.size(); ++k)
      out.fields.push_back(quantum_husimi(states[k], out.grid, times[k]));
    double worst = 0.0;
    for (const auto& f : out.fields) worst = std::max(worst, boundary_mass_fraction(f));
    if (worst <= 1e-4 || attempt >= 2) break;
    out.grid = out.grid.expanded(1.5);
    ++out.expansions;
  }
  return out;
}

struct LatticeSeries {
  std::vector<double> sigma_sq;
  double max_edge_mass = 0.0;
};

LatticeSeries lattice_sigma_series(const ModelParams& params, int L, double dt,
                                   const std::vector<double>& times) {
  const Eigen::MatrixXcd H = build_lattice_hamiltonian(params, L);
  const LatticeState psi0 = coherent_initial_state(L);
  const auto snaps = evolve_lattice(H, psi0, times.back(), dt, times);
  LatticeSeries out;
  for (const auto& s : snaps) {
    out.sigma_sq.push_back(sigma_squared_lattice(s));
    out.max_edge_mass = std::max(out.max_edge_mass, edge_mass(s));
  }
  return out;
}

void note_edge_mass(RunManifest& manifest, double edge) {
  manifest.diagnostics["lattice_edge_mass"] = format_double(edge);
  if (edge > 1e-6)
    manifest.notes.push_back("warning: lattice edge mass " + format_double(edge) +
                             " exceeds 1e-6; packet too close to the open boundary");
}

void note_semiclassical(RunManifest& manifest, const SemiclassicalDiagnostics& diag) {
  manifest.diagnostics["escaped_fraction"] = format_double(diag.escaped_fraction);
  manifest.diagnostics["max_log_norm"] = format_double(diag.max_log_norm);
  manifest.diagnostics["char_step_halving_error"] = format_double(diag.step_halving_error);
}

}  // namespace

TransportRecord run_lattice_transport(const RunConfig& cfg, RunManifest& manifest) {
  StageTimer timer(manifest, "lattice_transport");
  LatticeSeries series =
      lattice_sigma_series(cfg.model, cfg.numeric.lattice_size, cfg.numeric.dt, cfg.times);
  note_edge_mass(manifest, series.max_edge_mass);

  TransportRecord record;
  record.times = cfg.times;
  record.sigma_sq = series.sigma_sq;
  record.velocity_at_t = velocity(record, record.times.back());

  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < record.times.size(); ++k) {
    const double t = record.times[k];
    rows.push_back({t, record.sigma_sq[k], t > 0.0 ? std::sqrt(record.sigma_sq[k]) / t : 0.0});
  }
  emit_table(fs::path(cfg.output_dir) / "lattice.csv", {"t", "sigma_sq", "velocity"}, rows);
  return record;
}

std::vector<double> run_quantum_husimi(const RunConfig& cfg, RunManifest& manifest) {
  StageTimer timer(manifest, "quantum_husimi");
  const FockOperators ops = make_fock_operators(cfg.numeric.fock_dim);
  const Eigen::MatrixXcd H = build_continuum_hamiltonian(cfg.model, ops);
  const auto states = evolve_quantum_series(H, cfg.times, cfg.numeric.dt);
  const auto fields = quantum_fields(states, cfg.times, cfg.grid);
  if (fields.expansions > 0)
    manifest.notes.push_back("grid auto-expanded " + std::to_string(fields.expansions) +
                             " time(s) by the boundary-mass monitor");
  double max_top = 0.0;
  for (const auto& s : states) max_top = std::max(max_top, top_level_population(s));
  manifest.diagnostics["max_top_level_population"] = format_double(max_top);

  std::vector<double> sigma;
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < fields.fields.size(); ++k) {
    const auto& f = fields.fields[k];
    sigma.push_back(husimi_variance(f));
    rows.push_back({cfg.times[k], sigma.back(), field_mass(f)});
    emit_field(f, fs::path(cfg.output_dir) / ("qhusimi_t" + time_tag(cfg.times[k]) + ".csv"));
  }
  emit_table(fs::path(cfg.output_dir) / "qhusimi_sigma.csv", {"t", "sigma_sq", "mass"}, rows);
  return sigma;
}

std::vector<double> run_classical_husimi(const RunConfig& cfg, RunManifest& manifest) {
  StageTimer timer(manifest, "classical_husimi");
  SemiclassicalDiagnostics diag;
  const auto fields =
      semiclassical_husimi_series(cfg.model, cfg.grid, cfg.times, cfg.numeric.char_dt, &diag);
  note_semiclassical(manifest, diag);

  std::vector<double> sigma;
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < fields.size(); ++k) {
    sigma.push_back(husimi_variance(fields[k]));
    rows.push_back({cfg.times[k], sigma.back(), field_mass(fields[k])});
    emit_field(fields[k], fs::path(cfg.output_dir) / ("chusimi_t" + time_tag(cfg.times[k]) + ".csv"));
  }
  emit_table(fs::path(cfg.output_dir) / "chusimi_sigma.csv", {"t", "sigma_sq", "mass"}, rows);
  return sigma;
}

void run_phase_portrait(const RunConfig& cfg, RunManifest& manifest) {
  StageTimer timer(manifest, "phase_portrait");
  std::vector<PhasePoint> starts = cfg.portrait_starts;
  if (starts.empty()) {
    // Chord probes between adjacent saddles plus a small ring around the
    // first center reproduce the canonical portrait regions.
    const auto fps = fixed_points(cfg.model);
    const FixedPointReport* saddle = nullptr;
    const FixedPointReport* center = nullptr;
    const FixedPointReport* saddle2 = nullptr;
    for (const auto& fp : fps) {
      if (!fp.exists) continue;
      if (fp.stability == Stability::Saddle) {
        if (!saddle) saddle = &fp;
        else if (!saddle2 && std::abs(fp.location.p - saddle->location.p) > 0.1) saddle2 = &fp;
      } else if (!center) {
        center = &fp;
      }
    }
    if (saddle && saddle2) {
      for (int k = 1; k <= 5; ++k) {
        const double f = k / 6.0;
        starts.push_back({saddle->location.q + f * (saddle2->location.q - saddle->location.q),
                          saddle->location.p + f * (saddle2->location.p - saddle->location.p)});
      }
    }
    if (center) {
      const double r = 0.1 / cfg.model.beta();
      for (double ang : {0.0, 2.0, 4.0})
        starts.push_back({center->location.q + r * std::cos(ang), center->location.p + r * std::sin(ang)});
    }
    if (starts.empty())
      for (int k = -2; k <= 2; ++k) starts.push_back({0.25 * k / cfg.model.beta(), 1.5707963267948966});
  }

  const double horizon = cfg.times.back();
  std::vector<std::vector<double>> summary;
  for (size_t k = 0; k < starts.size(); ++k) {
    const int stride = std::max(1, static_cast<int>(0.05 / cfg.numeric.char_dt));
    const Trajectory traj =
        integrate_trajectory(cfg.model, starts[k], horizon, cfg.numeric.char_dt, stride);
    const fs::path path = fs::path(cfg.output_dir) / ("portrait_" + std::to_string(k) + ".csv");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "t,q,p,classification\n";
    for (size_t i = 0; i < traj.points.size(); ++i)
      out << format_double(traj.times[i]) << ',' << format_double(traj.points[i].q) << ','
          << format_double(traj.points[i].p) << ',' << trajectory_class_name(traj.classification)
          << '\n';
    if (!out.good()) throw IoError("write failed: " + path.string());
    summary.push_back({starts[k].q, starts[k].p, static_cast<double>(traj.classification)});
    manifest.notes.push_back("trajectory " + std::to_string(k) + ": " +
                             trajectory_class_name(traj.classification));
  }
  emit_table(fs::path(cfg.output_dir) / "portrait_summary.csv", {"q0", "p0", "classification"},
             summary);
}

void run_critical_point(const RunConfig& cfg, RunManifest& manifest) {
  StageTimer timer(manifest, "critical_point");
  const double vc = critical_potential(cfg.model);
  double vc_bracket = std::numeric_limits<double>::quiet_NaN();
  {
    StageTimer t2(manifest, "critical_point.bracket");
    vc_bracket = bracket_critical_potential(cfg.model, std::max(1e-3, 0.25 * vc), 2.0 * vc + 0.1,
                                            0.005 * vc);
  }
  const double vc_saddle = saddle_energy_match(cfg.model);
  double beta_special = std::numeric_limits<double>::quiet_NaN();
  if (cfg.model.variant() != Variant::HermitianAA)
    beta_special = special_beta(cfg.model, cfg.quantum_vc);
  else
    manifest.notes.push_back("special_beta skipped: critical potential is beta-independent");

  emit_table(fs::path(cfg.output_dir) / "critical.csv",
             {"v_c_analytic", "v_c_bracketed", "v_c_saddle_match", "special_beta"},
             {{vc, vc_bracket, vc_saddle, beta_special}});

  std::vector<std::vector<double>> rows;
  const auto fps = fixed_points(cfg.model);
  for (const auto& fp : fps) {
    rows.push_back({fp.location.q, fp.location.p, fp.eigenvalues[0].real(),
                    fp.eigenvalues[0].imag(), fp.eigenvalues[1].real(), fp.eigenvalues[1].imag(),
                    fp.stability == Stability::Saddle ? 1.0 : 0.0, fp.exists ? 1.0 : 0.0});
  }
  emit_table(fs::path(cfg.output_dir) / "fixed_points.csv",
             {"q", "p", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2", "is_saddle",
              "exists"},
             rows);
}

namespace {

VSweepRow sweep_point(const RunConfig& cfg, double v) {
  VSweepRow row;
  row.v = v;
  const ModelParams model = cfg.model.with_v(v);
  const double t_eval = cfg.times.back();

  if (cfg.engines.lattice) {
    try {
      LatticeSeries s = lattice_sigma_series(model, cfg.numeric.lattice_size, cfg.numeric.dt,
                                             {t_eval});
      row.v_lattice = std::sqrt(s.sigma_sq.back()) / t_eval;
      if (s.max_edge_mass > 1e-6)
        row.notes.push_back("lattice: edge mass " + format_double(s.max_edge_mass));
    } catch (const std::exception& e) {
      row.notes.push_back(std::string("lattice: ") + e.what());
    }
  }
  if (cfg.engines.quantum) {
    try {
      const FockOperators ops = make_fock_operators(cfg.numeric.fock_dim);
      const Eigen::MatrixXcd H = build_continuum_hamiltonian(model, ops);
      const auto states = evolve_quantum_series(H, {t_eval}, cfg.numeric.dt);
      const auto fields = quantum_fields(states, {t_eval}, cfg.grid);
      row.v_quantum = std::sqrt(husimi_variance(fields.fields.back())) / t_eval;
    } catch (const std::exception& e) {
      row.notes.push_back(std::string("quantum: ") + e.what());
    }
  }
  if (cfg.engines.classical) {
    try {
      const auto fields =
          semiclassical_husimi_series(model, cfg.grid, {t_eval}, cfg.numeric.char_dt, nullptr);
      row.v_classical = std::sqrt(husimi_variance(fields.back())) / t_eval;
    } catch (const std::exception& e) {
      row.notes.push_back(std::string("classical: ") + e.what());
    }
  }
  return row;
}

}  // namespace

std::vector<VSweepRow> run_vsweep(const RunConfig& cfg, RunManifest& manifest) {
  StageTimer timer(manifest, "vsweep");
  if (!cfg.sweep) throw ConfigError("config error: sweep: required for the vsweep experiment");
  const std::vector<double> vs = linspace(cfg.sweep->lo, cfg.sweep->hi, cfg.sweep->n);
  std::vector<VSweepRow> rows(vs.size());

  const int n_workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(vs.size())));
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= vs.size()) return;
      rows[i] = sweep_point(cfg, vs[i]);
    }
  };
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<std::vector<double>> table;
  for (const auto& row : rows) {
    table.push_back({row.v, row.v_lattice, row.v_quantum, row.v_classical});
    for (const auto& note : row.notes)
      manifest.notes.push_back("V=" + format_double(row.v) + " " + note);
  }
  emit_table(fs::path(cfg.output_dir) / "vsweep.csv",
             {"V", "v_lattice", "v_quantum_husimi", "v_classical_husimi"}, table);
  return rows;
}

void run_compare(const RunConfig& cfg, RunManifest& manifest) {
  StageTimer timer(manifest, "compare");
  std::vector<double> lattice_sigma(cfg.times.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> quantum_sigma(cfg.times.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> classical_sigma(cfg.times.size(), std::numeric_limits<double>::quiet_NaN());

  if (cfg.engines.lattice) {
    LatticeSeries s =
        lattice_sigma_series(cfg.model, cfg.numeric.lattice_size, cfg.numeric.dt, cfg.times);
    note_edge_mass(manifest, s.max_edge_mass);
    lattice_sigma = s.sigma_sq;
  }
  if (cfg.engines.quantum) {
    const FockOperators ops = make_fock_operators(cfg.numeric.fock_dim);
    const Eigen::MatrixXcd H = build_continuum_hamiltonian(cfg.model, ops);
    const auto states = evolve_quantum_series(H, cfg.times, cfg.numeric.dt);
    const auto fields = quantum_fields(states, cfg.times, cfg.grid);
    for (size_t k = 0; k < fields.fields.size(); ++k)
      quantum_sigma[k] = husimi_variance(fields.fields[k]);
  }
  if (cfg.engines.classical) {
    SemiclassicalDiagnostics diag;
    const auto fields =
        semiclassical_husimi_series(cfg.model, cfg.grid, cfg.times, cfg.numeric.char_dt, &diag);
    note_semiclassical(manifest, diag);
    for (size_t k = 0; k < fields.size(); ++k) classical_sigma[k] = husimi_variance(fields[k]);
  }

  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < cfg.times.size(); ++k)
    rows.push_back({cfg.times[k], lattice_sigma[k], quantum_sigma[k], classical_sigma[k]});
  emit_table(fs::path(cfg.output_dir) / "compare.csv",
             {"t", "sigma_sq_lattice", "sigma_sq_quantum", "sigma_sq_classical"}, rows);
}

std::vector<PurityRow> run_purity_scan(const RunConfig& cfg, RunManifest& manifest) {
  StageTimer timer(manifest, "purity_scan");
  std::vector<PurityRow> rows(cfg.times.size());
  for (size_t k = 0; k < cfg.times.size(); ++k) rows[k].t = cfg.times[k];

  if (cfg.engines.quantum) {
    const FockOperators ops = make_fock_operators(cfg.numeric.fock_dim);
    const Eigen::MatrixXcd H = build_continuum_hamiltonian(cfg.model, ops);
    const auto states = evolve_quantum_series(H, cfg.times, cfg.numeric.dt);
    const auto fields = quantum_fields(states, cfg.times, cfg.grid);
    if (fields.expansions > 0)
      manifest.notes.push_back("grid auto-expanded " + std::to_string(fields.expansions) +
                               " time(s) by the boundary-mass monitor");
    for (size_t k = 0; k < fields.fields.size(); ++k) {
      rows[k].purity = purity(fields.fields[k]);
      rows[k].sigma_sq_quantum = husimi_variance(fields.fields[k]);
    }
  }
  if (cfg.engines.classical) {
    SemiclassicalDiagnostics diag;
    const auto fields =
        semiclassical_husimi_series(cfg.model, cfg.grid, cfg.times, cfg.numeric.char_dt, &diag);
    note_semiclassical(manifest, diag);
    for (size_t k = 0; k < fields.size(); ++k)
      rows[k].sigma_sq_classical = husimi_variance(fields[k]);
  }

  std::vector<std::vector<double>> table;
  for (const auto& row : rows)
    table.push_back({row.t, row.purity, row.sigma_sq_quantum, row.sigma_sq_classical});
  emit_table(fs::path(cfg.output_dir) / "purity.csv",
             {"t", "purity", "sigma_sq_quantum", "sigma_sq_classical"}, table);
  return rows;
}

ExperimentOutcome run_experiment(const RunConfig& cfg, RunManifest& manifest) {
  {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + cfg.output_dir);
  }
  ExperimentOutcome outcome;
  switch (cfg.experiment) {
    case Experiment::LatticeTransport:
      outcome.rows_requested = static_cast<int>(cfg.times.size());
      run_lattice_transport(cfg, manifest);
      break;
    case Experiment::QuantumHusimi:
      outcome.rows_requested = static_cast<int>(cfg.times.size());
      run_quantum_husimi(cfg, manifest);
      break;
    case Experiment::ClassicalHusimi:
      outcome.rows_requested = static_cast<int>(cfg.times.size());
      run_classical_husimi(cfg, manifest);
      break;
    case Experiment::PhasePortrait:
      outcome.rows_requested = static_cast<int>(std::max<size_t>(cfg.portrait_starts.size(), 1));
      run_phase_portrait(cfg, manifest);
      break;
    case Experiment::CriticalPoint:
      outcome.rows_requested = 1;
      run_critical_point(cfg, manifest);
      break;
    case Experiment::VSweep: {
      const auto rows = run_vsweep(cfg, manifest);
      outcome.rows_requested = static_cast<int>(rows.size());
      for (const auto& row : rows) {
        const bool failed = (cfg.engines.lattice && std::isnan(row.v_lattice)) ||
                            (cfg.engines.quantum && std::isnan(row.v_quantum)) ||
                            (cfg.engines.classical && std::isnan(row.v_classical));
        if (failed) ++outcome.rows_failed;
      }
      break;
    }
    case Experiment::Compare:
      outcome.rows_requested = static_cast<int>(cfg.times.size());
      run_compare(cfg, manifest);
      break;
    case Experiment::PurityScan:
      outcome.rows_requested = static_cast<int>(cfg.times.size());
      run_purity_scan(cfg, manifest);
      break;
  }
  return outcome;
}

}  // namespace husimi
