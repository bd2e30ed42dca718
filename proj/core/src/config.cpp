#include "husimi/config.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "husimi/errors.hpp"

namespace husimi {

namespace {

using nlohmann::json;

constexpr double kGoldenBeta = 0.6180339887498949;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("config error: " + field + ": " + why);
}

void check_known_keys(const json& obj, const std::string& scope,
                      const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) fail(scope + "." + it.key(), "unknown field");
  }
}

double get_number(const json& obj, const std::string& scope, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(scope + "." + key, "must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& scope, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) fail(scope + "." + key, "must be an integer");
  return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& scope, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) fail(scope + "." + key, "must be a boolean");
  return obj[key].get<bool>();
}

ModelParams parse_model(const json& m) {
  check_known_keys(m, "model", {"variant", "j_left", "j_right", "j", "v", "beta"});
  if (!m.contains("variant") || !m["variant"].is_string())
    fail("model.variant", "required string: model_i | model_ii | hermitian_aa");
  const std::string variant = m["variant"].get<std::string>();
  const double beta = get_number(m, "model", "beta", kGoldenBeta);
  const double v = get_number(m, "model", "v", 0.5);
  if (v < 0.0) fail("model.v", "must be >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) fail("model.beta", "must be finite and > 0");

  try {
    if (variant == "model_i") {
      const double jl = get_number(m, "model", "j_left", 1.0);
      const double jr = get_number(m, "model", "j_right", 0.5);
      return ModelParams::model_i(jl, jr, v, beta);
    }
    if (variant == "model_ii") {
      if (m.contains("j_left") || m.contains("j_right"))
        fail("model.j_left", "model_ii uses the symmetric hopping field 'j'");
      return ModelParams::model_ii(get_number(m, "model", "j", 1.0), v, beta);
    }
    if (variant == "hermitian_aa") {
      if (m.contains("j_left") || m.contains("j_right"))
        fail("model.j_left", "hermitian_aa uses the symmetric hopping field 'j'");
      return ModelParams::hermitian_aa(get_number(m, "model", "j", 1.0), v, beta);
    }
  } catch (const std::invalid_argument& e) {
    fail("model", e.what());
  }
  fail("model.variant", "unknown variant '" + variant + "'");
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::LatticeTransport: return "lattice";
    case Experiment::QuantumHusimi: return "qhusimi";
    case Experiment::ClassicalHusimi: return "chusimi";
    case Experiment::PhasePortrait: return "portrait";
    case Experiment::CriticalPoint: return "critical";
    case Experiment::VSweep: return "vsweep";
    case Experiment::Compare: return "compare";
    case Experiment::PurityScan: return "purity";
  }
  return "unknown";
}

Experiment experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::LatticeTransport, Experiment::QuantumHusimi,
                       Experiment::ClassicalHusimi, Experiment::PhasePortrait,
                       Experiment::CriticalPoint, Experiment::VSweep, Experiment::Compare,
                       Experiment::PurityScan}) {
    if (name == experiment_name(e)) return e;
  }
  throw ConfigError("config error: experiment: unknown experiment '" + name + "'");
}

void RunConfig::apply_time_defaults() {
  if (!times.empty()) return;
  const bool short_horizon = model.variant() == Variant::ModelII;
  switch (experiment) {
    case Experiment::LatticeTransport:
      for (int k = 1; k <= 20; ++k) times.push_back(5.0 * k);  // out to t = 100
      break;
    case Experiment::QuantumHusimi:
    case Experiment::ClassicalHusimi:
    case Experiment::Compare:
    case Experiment::PurityScan:
      if (short_horizon)
        for (int k = 0; k <= 10; ++k) times.push_back(1.0 * k);
      else
        for (int k = 0; k <= 12; ++k) times.push_back(2.5 * k);
      break;
    case Experiment::VSweep:
      times.push_back(short_horizon ? 10.0 : 30.0);
      break;
    case Experiment::PhasePortrait:
      times.push_back(200.0);
      break;
    case Experiment::CriticalPoint:
      break;
  }
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config error: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config error: top level must be a JSON object");
  check_known_keys(doc, "config",
                   {"model", "experiment", "grid", "times", "sweep", "engines", "output_dir",
                    "numeric", "workers", "quantum_vc", "portrait_starts"});

  RunConfig cfg;
  if (!doc.contains("model")) fail("model", "required object");
  cfg.model = parse_model(doc["model"]);

  if (doc.contains("experiment")) {
    if (!doc["experiment"].is_string()) fail("experiment", "must be a string");
    cfg.experiment = experiment_from_name(doc["experiment"].get<std::string>());
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    check_known_keys(g, "grid", {"q_min", "q_max", "p_min", "p_max", "nq", "np"});
    const double qmin = get_number(g, "grid", "q_min", -40.0);
    const double qmax = get_number(g, "grid", "q_max", 40.0);
    const double pmin = get_number(g, "grid", "p_min", -10.0);
    const double pmax = get_number(g, "grid", "p_max", 10.0);
    const int nq = get_int(g, "grid", "nq", 400);
    const int np = get_int(g, "grid", "np", 200);
    if (nq < 2) fail("grid.nq", "must be >= 2");
    if (np < 2) fail("grid.np", "must be >= 2");
    if (!(qmax > qmin)) fail("grid.q_max", "must exceed grid.q_min");
    if (!(pmax > pmin)) fail("grid.p_max", "must exceed grid.p_min");
    cfg.grid = PhaseSpaceGrid(qmin, qmax, pmin, pmax, nq, np);
  }

  if (doc.contains("times")) {
    cfg.times_explicit = true;
    if (!doc["times"].is_array()) fail("times", "must be an array of numbers");
    for (const auto& t : doc["times"]) {
      if (!t.is_number()) fail("times", "must contain only numbers");
      cfg.times.push_back(t.get<double>());
    }
    for (size_t k = 0; k < cfg.times.size(); ++k) {
      if (cfg.times[k] < 0.0) fail("times", "entries must be >= 0");
      if (k > 0 && cfg.times[k] <= cfg.times[k - 1])
        fail("times", "entries must be strictly increasing");
    }
  }

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    check_known_keys(s, "sweep", {"parameter", "lo", "hi", "n"});
    SweepSpec spec;
    if (s.contains("parameter")) {
      if (!s["parameter"].is_string()) fail("sweep.parameter", "must be a string");
      spec.parameter = s["parameter"].get<std::string>();
    }
    if (spec.parameter != "v") fail("sweep.parameter", "only 'v' sweeps are supported");
    spec.lo = get_number(s, "sweep", "lo", 0.0);
    spec.hi = get_number(s, "sweep", "hi", 1.0);
    spec.n = get_int(s, "sweep", "n", 2);
    if (spec.lo < 0.0) fail("sweep.lo", "must be >= 0");
    if (!(spec.hi > spec.lo)) fail("sweep.hi", "must exceed sweep.lo");
    if (spec.n < 2) fail("sweep.n", "must be >= 2");
    cfg.sweep = spec;
  }

  if (doc.contains("engines")) {
    const json& e = doc["engines"];
    check_known_keys(e, "engines", {"lattice", "quantum", "classical"});
    cfg.engines.lattice = get_bool(e, "engines", "lattice", true);
    cfg.engines.quantum = get_bool(e, "engines", "quantum", true);
    cfg.engines.classical = get_bool(e, "engines", "classical", true);
  }

  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) fail("output_dir", "must be a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }

  if (doc.contains("numeric")) {
    const json& n = doc["numeric"];
    check_known_keys(n, "numeric", {"dt", "char_dt", "fock_dim", "lattice_size"});
    cfg.numeric.dt = get_number(n, "numeric", "dt", cfg.numeric.dt);
    cfg.numeric.char_dt = get_number(n, "numeric", "char_dt", cfg.numeric.char_dt);
    cfg.numeric.fock_dim = get_int(n, "numeric", "fock_dim", cfg.numeric.fock_dim);
    cfg.numeric.lattice_size = get_int(n, "numeric", "lattice_size", cfg.numeric.lattice_size);
    if (!(cfg.numeric.dt > 0.0)) fail("numeric.dt", "must be > 0");
    if (!(cfg.numeric.char_dt > 0.0)) fail("numeric.char_dt", "must be > 0");
    if (cfg.numeric.fock_dim < 8) fail("numeric.fock_dim", "must be >= 8");
    if (cfg.numeric.lattice_size < 3 || cfg.numeric.lattice_size % 2 == 0)
      fail("numeric.lattice_size", "must be odd and >= 3");
  }

  if (doc.contains("workers")) {
    cfg.workers = get_int(doc, "config", "workers", cfg.workers);
    if (cfg.workers < 1) fail("workers", "must be >= 1");
  }

  cfg.quantum_vc = get_number(doc, "config", "quantum_vc", cfg.quantum_vc);
  if (!(cfg.quantum_vc > 0.0)) fail("quantum_vc", "must be > 0");

  if (doc.contains("portrait_starts")) {
    if (!doc["portrait_starts"].is_array()) fail("portrait_starts", "must be an array of [q, p]");
    for (const auto& entry : doc["portrait_starts"]) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
        fail("portrait_starts", "each entry must be a [q, p] pair of numbers");
      cfg.portrait_starts.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
  }

  if (cfg.experiment == Experiment::VSweep && !cfg.sweep)
    fail("sweep", "required for the vsweep experiment");

  cfg.apply_time_defaults();
  return cfg;
}

std::string config_echo(const RunConfig& cfg) {
  json doc;
  json m;
  m["variant"] = variant_name(cfg.model.variant());
  if (cfg.model.variant() == Variant::ModelI) {
    m["j_left"] = cfg.model.j_left();
    m["j_right"] = cfg.model.j_right();
  } else {
    m["j"] = cfg.model.j();
  }
  m["v"] = cfg.model.v();
  m["beta"] = cfg.model.beta();
  doc["model"] = m;
  doc["experiment"] = experiment_name(cfg.experiment);
  doc["grid"] = {{"q_min", cfg.grid.q_min}, {"q_max", cfg.grid.q_max},
                 {"p_min", cfg.grid.p_min}, {"p_max", cfg.grid.p_max},
                 {"nq", cfg.grid.nq},       {"np", cfg.grid.np}};
  doc["times"] = cfg.times;
  if (cfg.sweep)
    doc["sweep"] = {{"parameter", cfg.sweep->parameter},
                    {"lo", cfg.sweep->lo},
                    {"hi", cfg.sweep->hi},
                    {"n", cfg.sweep->n}};
  doc["engines"] = {{"lattice", cfg.engines.lattice},
                    {"quantum", cfg.engines.quantum},
                    {"classical", cfg.engines.classical}};
  doc["output_dir"] = cfg.output_dir;
  doc["numeric"] = {{"dt", cfg.numeric.dt},
                    {"char_dt", cfg.numeric.char_dt},
                    {"fock_dim", cfg.numeric.fock_dim},
                    {"lattice_size", cfg.numeric.lattice_size}};
  doc["workers"] = cfg.workers;
  doc["quantum_vc"] = cfg.quantum_vc;
  if (!cfg.portrait_starts.empty()) {
    json starts = json::array();
    for (const auto& s : cfg.portrait_starts) starts.push_back({s.q, s.p});
    doc["portrait_starts"] = starts;
  }
  return doc.dump(2);
}

}  // namespace husimi
