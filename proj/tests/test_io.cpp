#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "husimi/config.hpp"
#include "husimi/errors.hpp"
#include "husimi/experiments.hpp"
#include "husimi/io.hpp"

using namespace husimi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("husimi_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config defaults per variant") {
  const auto cfg = parse_config(R"({"model": {"variant": "model_i"}})");
  CHECK(cfg.model.j_left() == 1.0);
  CHECK(cfg.model.j_right() == 0.5);
  CHECK(cfg.model.beta() == doctest::Approx(0.6180339887498949).epsilon(1e-15));
  CHECK(cfg.model.v() == 0.5);
  CHECK(cfg.numeric.lattice_size == 601);
  CHECK(cfg.numeric.fock_dim == 300);
  CHECK(cfg.experiment == Experiment::LatticeTransport);
  CHECK(cfg.times.back() == 100.0);

  const auto cfg2 = parse_config(R"({"model": {"variant": "model_ii"}})");
  CHECK(cfg2.model.j() == 1.0);

  const auto cfg3 = parse_config(
      R"({"model": {"variant": "model_ii"}, "experiment": "qhusimi"})");
  CHECK(cfg3.times.back() == 10.0);  // short horizon for Model II
}

TEST_CASE("config validation names the offending field") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"variant": "model_i", "v": -1}})"),
                       doctest::Contains("model.v"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"variant": "nope"}})"),
                       doctest::Contains("model.variant"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"variant": "model_i"}, "bogus": 1})"),
                       doctest::Contains("bogus"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"model": {"variant": "model_i"}, "sweep": {"parameter": "beta"}})"),
      doctest::Contains("sweep.parameter"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"model": {"variant": "model_i"}, "experiment": "vsweep"})"),
      doctest::Contains("sweep"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"model": {"variant": "model_i"}, "numeric": {"lattice_size": 600}})"),
      doctest::Contains("lattice_size"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
}

TEST_CASE("format_double round-trips exactly") {
  for (double x : {0.1, 1.0 / 3.0, 2.718281828459045, 1e-17, 6.626e33, -0.0}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("emit_field structure and determinism") {
  HusimiField f;
  f.grid = PhaseSpaceGrid(0, 1, 0, 1, 2, 2);
  f.values.resize(2, 2);
  f.values << 1.0, 0.25, 0.5, 0.125;

  const fs::path dir = temp_dir("emit_field");
  emit_field(f, dir / "field.csv");
  const std::string text = slurp(dir / "field.csv");

  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 5);  // header + 4 rows
  CHECK(text.substr(0, 10) == "q,p,value\n");

  emit_field(f, dir / "field2.csv");
  CHECK(slurp(dir / "field2.csv") == text);  // byte-identical

  std::istringstream ss(text);
  std::string line;
  std::getline(ss, line);
  while (std::getline(ss, line)) {
    const auto last = line.rfind(',');
    CHECK(std::strtod(line.substr(last + 1).c_str(), nullptr) >= 0.0);
  }
}

TEST_CASE("experiment outputs are byte-identical across re-runs") {
  const std::string config_text = R"({
    "model": {"variant": "hermitian_aa", "v": 0.4},
    "experiment": "chusimi",
    "grid": {"q_min": -6, "q_max": 6, "p_min": -4, "p_max": 4, "nq": 31, "np": 21},
    "times": [0, 1],
    "numeric": {"char_dt": 0.01}
  })";

  std::string first;
  for (int run = 0; run < 2; ++run) {
    auto cfg = parse_config(config_text);
    const fs::path dir = temp_dir("determinism");
    cfg.output_dir = dir.string();
    RunManifest manifest;
    manifest.config_echo = config_echo(cfg);
    run_experiment(cfg, manifest);
    const std::string text = slurp(dir / "chusimi_t1.csv") + slurp(dir / "chusimi_sigma.csv");
    if (run == 0) first = text;
    else CHECK(text == first);
  }
}

TEST_CASE("vsweep degrades gracefully and reports per-row failures") {
  auto cfg = parse_config(R"({
    "model": {"variant": "model_i", "v": 0.2},
    "experiment": "vsweep",
    "sweep": {"parameter": "v", "lo": 0.1, "hi": 0.3, "n": 3},
    "grid": {"q_min": -10, "q_max": 10, "p_min": -5, "p_max": 5, "nq": 21, "np": 11},
    "times": [2.0],
    "numeric": {"fock_dim": 8, "char_dt": 0.01, "lattice_size": 41},
    "workers": 2
  })");
  const fs::path dir = temp_dir("vsweep");
  cfg.output_dir = dir.string();
  RunManifest manifest;
  manifest.config_echo = config_echo(cfg);
  // fock_dim = 8 cannot hold the spreading state: the quantum engine fails
  // per-row (truncation guard), the other engines still produce values.
  const auto rows = run_vsweep(cfg, manifest);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(!std::isnan(row.v_lattice));
    CHECK(!std::isnan(row.v_classical));
    CHECK(std::isnan(row.v_quantum));
    CHECK(!row.notes.empty());
  }
  CHECK(slurp(dir / "vsweep.csv").find("nan") != std::string::npos);

  // Manifest records the failures and is written even on guard errors.
  write_manifest(manifest, dir / "manifest.json");
  const std::string mtext = slurp(dir / "manifest.json");
  CHECK(mtext.find("quantum:") != std::string::npos);
}

TEST_CASE("critical experiment emits the analytic table") {
  auto cfg = parse_config(R"({
    "model": {"variant": "hermitian_aa", "v": 0.5},
    "experiment": "critical"
  })");
  const fs::path dir = temp_dir("critical");
  cfg.output_dir = dir.string();
  RunManifest manifest;
  manifest.config_echo = config_echo(cfg);
  run_critical_point(cfg, manifest);
  const std::string text = slurp(dir / "critical.csv");
  CHECK(text.find("v_c_analytic") != std::string::npos);
  CHECK(slurp(dir / "fixed_points.csv").find("is_saddle") != std::string::npos);
}
