#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "viscotherm/cli.hpp"
#include "viscotherm/config.hpp"
#include "viscotherm/output.hpp"

using namespace viscotherm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("viscotherm_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "viscotherm");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("empty config takes the defaults") {
  const RunConfig c = parse_config_string("");
  CHECK(c.grid.n_nodes == 401);
  CHECK(c.grid.length == doctest::Approx(3.141592653589793));
  CHECK(c.step.dt == 1e-4);
  CHECK(c.step.epsilon == 1e-3);
  CHECK(c.coefficients.presets == std::vector<std::string>{"rational-visc", "linear-dilation"});
  CHECK(c.initial.preset == "sine-mode");
  CHECK_FALSE(c.sweep.has_value());
  CHECK(c.warnings.empty());
}

TEST_CASE("minimal config overrides only what it names") {
  const RunConfig c = parse_config_string("grid:\n  n_nodes: 51\nstep:\n  dt: 1.0e-3\n");
  CHECK(c.grid.n_nodes == 51);
  CHECK(c.step.dt == 1e-3);
  CHECK(c.step.t_end == 1.0);
  CHECK(c.make_grid().dx() == doctest::Approx(3.141592653589793 / 50));
}

TEST_CASE("coefficient parameters are passed to the presets") {
  const RunConfig c = parse_config_string(
      "coefficients:\n  preset: [rational-visc, linear-dilation]\n  k_gamma: 0.5\n  b: 0.25\n");
  const Coefficients co = c.make_coefficients();
  CHECK(co.k_gamma == 0.5);
  CHECK(co.f(2.0) == doctest::Approx(0.5));
}

TEST_CASE("growth exponent above the threshold warns") {
  const RunConfig c = parse_config_string("coefficients:\n  preset: power-f\n  alpha: 1.6\n");
  REQUIRE(c.warnings.size() == 1);
  CHECK(c.warnings[0].find("alpha") != std::string::npos);
}

TEST_CASE("vanishing viscosity bound is rejected") {
  try {
    parse_config_string("grid:\n  n_nodes: 21\ncoefficients:\n  preset: rational-visc\n  k_gamma: 0\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("k_gamma") != std::string::npos);
  }
}

TEST_CASE("unknown keys are reported with their line") {
  try {
    parse_config_string("grid:\n  n_nodes: 21\nstep:\n  dt: 1e-3\n  dtt: 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 5);
    CHECK(e.key() == "step.dtt");
  }
  try {
    parse_config_string("gird:\n  n_nodes: 21\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 1);
  }
  CHECK_THROWS_AS(parse_config_string("step:\n  dt: fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("step:\n  dt: -1\n"), ConfigError);
}

TEST_CASE("doubles survive a text round trip bit-exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 2000; ++k) {
    const double x = U(rng) * std::pow(10.0, static_cast<int>(U(rng) * 300));
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(parse_double(format_double(std::numeric_limits<double>::denorm_min())) ==
        std::numeric_limits<double>::denorm_min());
  CHECK_THROWS(parse_double("1.0x"));
}

TEST_CASE("states csv round trip") {
  const fs::path dir = scratch("roundtrip");
  Trajectory tr;
  tr.grid = make_grid(1.0, 6);
  tr.dt = 0.1;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 4; ++k) {
    State s;
    s.t = 0.1 * k;
    for (int i = 0; i < 6; ++i) {
      s.v.push_back(U(rng) / 3.0);
      s.u.push_back(U(rng) * 1e-7);
      s.theta.push_back(std::exp(U(rng)));
    }
    tr.states.push_back(s);
  }
  write_states_csv(dir / "states.csv", tr);
  const std::vector<State> back = read_states_csv(dir / "states.csv");
  REQUIRE(back.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(back[k].t == tr.states[k].t);
    CHECK(back[k].v == tr.states[k].v);
    CHECK(back[k].u == tr.states[k].u);
    CHECK(back[k].theta == tr.states[k].theta);
  }
  write_states_csv(dir / "strided.csv", tr, 2);
  const std::vector<State> strided = read_states_csv(dir / "strided.csv");
  REQUIRE(strided.size() == 3);
  CHECK(strided.back().t == tr.states.back().t);
}

TEST_CASE("run on zero data writes an all-zero energy ledger") {
  const fs::path dir = scratch("zero_run");
  write_file(dir / "cfg.yaml",
             "grid:\n  n_nodes: 21\n"
             "initial:\n  preset: sine-mode\n  A: 0\n  B: 0\n  c: 0\n  d: 0\n"
             "step:\n  dt: 1.0e-3\n  t_end: 0.05\n"
             "output:\n  states_stride: 10\n");
  REQUIRE(invoke({"run", "--config", (dir / "cfg.yaml").string(), "--out", (dir / "out").string(),
                  "--quiet"}) == 0);
  for (const char* f : {"states.csv", "energy.csv", "estimates.csv", "weak_residuals.csv",
                        "manifest.json", "energy.svg"}) {
    CHECK(fs::exists(dir / "out" / f));
  }
  const CsvTable e = read_csv(dir / "out" / "energy.csv");
  REQUIRE(e.rows.size() == 51);
  for (const auto& row : e.rows)
    for (std::size_t c = 1; c < row.size(); ++c) CHECK(parse_double(row[c]) == 0.0);
  const std::vector<State> st = read_states_csv(dir / "out" / "states.csv");
  CHECK(st.size() == 6);
  std::ifstream m(dir / "out" / "manifest.json");
  std::stringstream ss;
  ss << m.rdbuf();
  CHECK(ss.str().find("\"command\"") != std::string::npos);
  CHECK(ss.str().find("\"wall_time_s\"") != std::string::npos);
}

TEST_CASE("sweep with a single epsilon fails cleanly") {
  const fs::path dir = scratch("bad_sweep");
  write_file(dir / "cfg.yaml", "grid:\n  n_nodes: 21\nstep:\n  dt: 1.0e-3\n  t_end: 0.01\n"
                               "sweep:\n  epsilons: [1.0e-3]\n");
  std::stringstream err;
  auto* old = std::cerr.rdbuf(err.rdbuf());
  const int code = invoke({"sweep", "--config", (dir / "cfg.yaml").string(), "--out",
                           (dir / "out").string(), "--quiet"});
  std::cerr.rdbuf(old);
  CHECK(code == 1);
  CHECK(err.str().find("sweep requires ≥ 3 epsilons") != std::string::npos);
}

TEST_CASE("sweep writes its table") {
  const fs::path dir = scratch("sweep");
  write_file(dir / "cfg.yaml", "grid:\n  n_nodes: 21\nstep:\n  dt: 1.0e-3\n  t_end: 0.05\n"
                               "sweep:\n  epsilons: [1.0e-2, 1.0e-3, 1.0e-4]\n");
  REQUIRE(invoke({"sweep", "--config", (dir / "cfg.yaml").string(), "--out",
                  (dir / "out").string(), "--quiet"}) == 0);
  const CsvTable t = read_csv(dir / "out" / "sweep.csv");
  CHECK(t.rows.size() == 2);
  CHECK(t.column("d_flux") == 5);
}

TEST_CASE("unknown subcommand and missing config exit with 1") {
  CHECK(invoke({"frobnicate"}) != 0);
  std::stringstream err;
  auto* old = std::cerr.rdbuf(err.rdbuf());
  CHECK(invoke({"run", "--config", "/nonexistent/cfg.yaml", "--quiet"}) == 1);
  std::cerr.rdbuf(old);
}

TEST_CASE("check battery passes quickly") {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<CheckOutcome> r = invariant_battery();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 10.0);
  REQUIRE(r.size() >= 9);
  for (const auto& c : r) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }
}

TEST_CASE("installed binary runs the check command") {
  const char* exe = std::getenv("VISCOTHERM_CLI");
  if (exe == nullptr) return;
  const std::string cmd = std::string(exe) + " check --quiet";
  CHECK(std::system(cmd.c_str()) == 0);
}
