#include "viscotherm/cli.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "viscotherm/config.hpp"
#include "viscotherm/convergence.hpp"
#include "viscotherm/diagnostics.hpp"
#include "viscotherm/linalg.hpp"
#include "viscotherm/operators.hpp"
#include "viscotherm/output.hpp"
#include "viscotherm/version.hpp"

namespace viscotherm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Invariant battery

constexpr int kCheckNodes = 41;
constexpr double kCheckDt = 1e-3;
constexpr long kCheckSteps = 100;

StepConfig check_step() {
  StepConfig s;
  s.dt = kCheckDt;
  s.t_end = kCheckDt * kCheckSteps;
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

CheckOutcome outcome(std::string name, bool pass, double value) {
  std::ostringstream d;
  d << value;
  return {std::move(name), pass, d.str()};
}

CheckOutcome check_zero_fixed_point() {
  const Grid g = make_grid(std::numbers::pi, kCheckNodes);
  const Coefficients c = coefficient_presets(std::vector<std::string>{"rational-visc", "linear-dilation"});
  const Trajectory tr = run(zero_initial_data(g), c, g, check_step());
  double worst = 0.0;
  for (const State& s : tr.states) {
    worst = std::max({worst, max_abs(s.v), max_abs(s.u), max_abs(s.theta)});
  }
  return outcome("zero data stays zero", worst == 0.0, worst);
}

CheckOutcome check_symmetry() {
  const Grid g = make_grid(std::numbers::pi, kCheckNodes);
  const Coefficients c = coefficient_presets(std::vector<std::string>{"rational-visc", "linear-dilation"});
  const InitialData init = initial_preset("sine-mode", g, {{"k", 2}, {"B", 0.5}, {"m", 2}});
  const Trajectory tr = run(init, c, g, check_step());
  const std::size_t n = static_cast<std::size_t>(g.n());
  double worst = 0.0;
  for (const State& s : tr.states) {
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max({worst, std::abs(s.v[i] + s.v[n - 1 - i]),
                        std::abs(s.u[i] + s.u[n - 1 - i]),
                        std::abs(s.theta[i] - s.theta[n - 1 - i])});
    }
  }
  return outcome("odd/even symmetry about L/2", worst <= 1e-10, worst);
}

CheckOutcome check_theta_shift() {
  const Grid g = make_grid(std::numbers::pi, kCheckNodes);
  const Coefficients c = coefficient_presets("const", {{"gamma0", 1.5}});
  InitialData base = initial_preset("sine-mode", g);
  InitialData shifted = base;
  for (double& th : shifted.theta0) th += 0.75;
  const Trajectory a = run(base, c, g, check_step());
  const Trajectory b = run(shifted, c, g, check_step());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    for (std::size_t i = 0; i < a.states[k].theta.size(); ++i) {
      worst = std::max(worst, std::abs(b.states[k].theta[i] - a.states[k].theta[i] - 0.75));
      worst = std::max(worst, std::abs(b.states[k].v[i] - a.states[k].v[i]));
    }
  }
  return outcome("additive temperature shift", worst <= 1e-10, worst);
}

CheckOutcome check_determinism() {
  const Grid g = make_grid(std::numbers::pi, kCheckNodes);
  const Coefficients c = coefficient_presets(std::vector<std::string>{"rational-visc", "linear-dilation"});
  const InitialData init = initial_preset("random-seeded", g, {}, 7);
  const Trajectory a = run(init, c, g, check_step());
  const Trajectory b = run(init, c, g, check_step());
  bool same = a.states.size() == b.states.size();
  for (std::size_t k = 0; same && k < a.states.size(); ++k) {
    same = a.states[k].v == b.states[k].v && a.states[k].u == b.states[k].u &&
           a.states[k].theta == b.states[k].theta;
  }
  return {"bit-identical reruns", same, same ? "identical" : "differ"};
}

CheckOutcome check_theta_nonnegative() {
  const Grid g = make_grid(std::numbers::pi, kCheckNodes);
  const Coefficients c = coefficient_presets("rational-visc");
  const InitialData init = initial_preset("sine-mode", g, {{"c", 0.0}, {"d", 0.0}, {"B", 1.0}});
  const Trajectory tr = run(init, c, g, check_step());
  const std::vector<double> track = theta_min_track(tr);
  const double m = *std::min_element(track.begin(), track.end());
  return outcome("theta >= -1e-12 without coupling", m >= -1e-12, m);
}

CheckOutcome check_energy_balance() {
  const Grid g = make_grid(std::numbers::pi, kCheckNodes);
  const Coefficients c = coefficient_presets(std::vector<std::string>{"rational-visc", "linear-dilation"});
  const InitialData init = initial_preset("sine-mode", g);
  StepConfig s = check_step();
  const EnergyReport e1 = energy_ledger(run(init, c, g, s), c);
  s.dt /= 2;
  const EnergyReport e2 = energy_ledger(run(init, c, g, s), c);
  const double ratio = e1.final_balance_residual() / e2.final_balance_residual();
  const bool pass = e1.max_balance_residual() <= 1e-2 * e1.initial_total() && ratio >= 1.6 &&
                    ratio <= 2.4;
  return outcome("energy balance and dt-halving ratio", pass, ratio);
}

CheckOutcome check_presets() {
  bool pass = true;
  for (const char* name : {"const", "rational-visc", "power-f", "linear-dilation"}) {
    pass = pass && check_bounds(coefficient_presets(name)).ok();
  }
  return {"preset bounds on the lattice", pass, pass ? "ok" : "violated"};
}

CheckOutcome check_operators() {
  const Grid g = make_grid(1.3, kCheckNodes);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.5, 2.0);
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<double> f(n), h(n), gam(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = U(rng);
    h[i] = U(rng);
    gam[i] = P(rng);
  }
  f.front() = f.back() = h.front() = h.back() = 0.0;
  std::vector<double> prod(n);
  const std::vector<double> div = flux_divergence(gam, f, g);
  for (std::size_t i = 0; i < n; ++i) prod[i] = h[i] * div[i];
  double rhs = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    rhs -= 0.5 * (gam[i] + gam[i + 1]) * (f[i + 1] - f[i]) * (h[i + 1] - h[i]) / g.dx();
  }
  const double sbp = std::abs(trapezoid(prod, g) - rhs);
  const double cons = std::abs(trapezoid(laplacian_neumann(h, g), g));
  return outcome("summation by parts and Neumann conservation", sbp <= 1e-12 && cons <= 1e-12,
                 std::max(sbp, cons));
}

CheckOutcome check_solver() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  bool pass = true;
  for (int trial = 0; trial < 50 && pass; ++trial) {
    const int n = 10 + trial;
    BandedOperator a(n, 2);
    std::vector<double> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double off = 0.0;
      for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
        if (j == i) continue;
        a.ref(i, j) = U(rng);
        off += std::abs(a.at(i, j));
      }
      a.ref(i, i) = off + 0.5;
      b[static_cast<std::size_t>(i)] = U(rng);
    }
    const std::vector<double> x = solve_pentadiagonal(BandedSystem(a, b));
    pass = residual_ok(a, x, b);
  }
  return {"banded solver residuals", pass, pass ? "ok" : "residual too large"};
}

// ---------------------------------------------------------------------------
// Commands

struct Options {
  std::string config;
  std::string out;
  bool quiet = false;
  std::optional<std::uint64_t> seed;
};

RunConfig load(const Options& opt) {
  RunConfig cfg = opt.config.empty() ? RunConfig{} : parse_config(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.out.empty()) cfg.output.dir = opt.out;
  return cfg;
}

json config_json(const RunConfig& c) {
  json j;
  j["source"] = c.source;
  j["grid"] = {{"L", c.grid.length}, {"n_nodes", c.grid.n_nodes}};
  j["coefficients"] = {{"preset", c.coefficients.presets}, {"params", c.coefficients.params}};
  j["initial"] = {{"preset", c.initial.preset},
                  {"params", c.initial.params},
                  {"smoothing", c.initial.smoothing}};
  j["step"] = {{"dt", c.step.dt},
               {"epsilon", c.step.epsilon},
               {"t_end", c.step.t_end},
               {"theta_clip", c.step.theta_clip},
               {"record_every", c.step.record_every},
               {"picard_iters", c.step.picard_iters}};
  const DiagnosticsConfig& d = c.diagnostics;
  j["diagnostics"] = {{"energy", d.energy},     {"identity", d.identity},
                      {"estimates", d.estimates}, {"p", d.p},
                      {"q", d.q},               {"r", d.r},
                      {"weak_residuals", d.weak_residuals},
                      {"localized", d.localized}, {"zeta_t0", d.zeta_t0},
                      {"zeta_t1", d.zeta_t1}};
  if (c.sweep) j["sweep"] = {{"epsilons", c.sweep->epsilons}, {"q", c.sweep->q}};
  j["refine"] = {{"levels", c.refine.levels}, {"n0", c.refine.n0},
                 {"dt0", c.refine.dt0},       {"dt_ratio", c.refine.dt_ratio},
                 {"t_end", c.refine.t_end},   {"epsilon", c.refine.epsilon}};
  j["output"] = {{"dir", c.output.dir},
                 {"states_stride", c.output.states_stride},
                 {"plots", c.output.plots}};
  j["seed"] = c.seed;
  return j;
}

void add_warnings(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& w : from) {
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
  }
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg,
                    double wall, const std::vector<std::string>& warnings, const json& results,
                    const std::vector<std::string>& files) {
  json m;
  m["command"] = command;
  m["config"] = config_json(cfg);
  m["versions"] = {{"viscotherm", kVersion},
                   {"compiler", __VERSION__},
                   {"cplusplus", static_cast<long>(__cplusplus)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  m["wall_time_s"] = wall;
  m["warnings"] = warnings;
  m["results"] = results;
  m["files"] = files;
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << m.dump(2) << '\n';
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int command_run(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig cfg = load(opt);
  const Grid grid = cfg.make_grid();
  const Coefficients coeffs = cfg.make_coefficients();
  const Trajectory traj = run(cfg.make_initial(grid), coeffs, grid, cfg.step);
  const fs::path dir = cfg.output.dir;
  std::vector<std::string> warnings = cfg.warnings;
  add_warnings(warnings, traj.warnings);
  std::vector<std::string> files{"states.csv"};
  json results;

  write_states_csv(dir / "states.csv", traj, cfg.output.states_stride);
  results["steps"] = cfg.step.steps();
  results["min_theta"] = traj.min_theta;
  results["clamped_mass"] = traj.clamped_mass;
  if (cfg.diagnostics.energy) {
    const EnergyReport e = energy_ledger(traj, coeffs);
    write_energy_csv(dir / "energy.csv", e);
    files.push_back("energy.csv");
    results["energy"] = {{"initial_total", e.initial_total()},
                         {"max_balance_residual", e.max_balance_residual()},
                         {"a_priori_ratios", a_priori_ratios(e)}};
    if (cfg.output.plots) {
      write_line_plot_svg(dir / "energy.svg", "energy ledger", "t",
                          {{"kinetic", e.t, e.kinetic},
                           {"elastic", e.t, e.elastic},
                           {"thermal", e.t, e.thermal},
                           {"total", e.t, e.total}});
      files.push_back("energy.svg");
    }
  }
  if (cfg.diagnostics.identity) {
    results["testing_identity_max_abs"] = testing_identity_residual(traj, coeffs).max_abs;
  }
  if (cfg.diagnostics.estimates) {
    std::vector<EstimateReport> reps;
    for (double p : cfg.diagnostics.p) {
      for (double q : cfg.diagnostics.q) {
        for (double r : cfg.diagnostics.r) {
          reps.push_back(estimate_integrals(traj, p, q, r));
          add_warnings(warnings, reps.back().warnings);
        }
      }
    }
    write_estimates_csv(dir / "estimates.csv", reps);
    files.push_back("estimates.csv");
  }
  if (cfg.diagnostics.weak_residuals) {
    const WeakResidualReport w =
        weak_residuals(traj, coeffs, standard_battery(grid.length(), traj.t_end()));
    write_weak_residuals_csv(dir / "weak_residuals.csv", w);
    files.push_back("weak_residuals.csv");
    results["weak_residuals"] = {{"max_abs_wu", w.max_abs_wu()}, {"max_abs_wt", w.max_abs_wt()}};
  }
  if (cfg.diagnostics.localized) {
    if (cfg.diagnostics.zeta_t1 <= traj.t_end()) {
      const CutoffZeta zeta(cfg.diagnostics.zeta_t0, cfg.diagnostics.zeta_t1);
      results["localized_slack"] = localized_energy_slack(traj, coeffs, zeta);
      results["localized_regularization_loss"] = localized_regularization_loss(traj, coeffs, zeta);
    } else {
      warnings.push_back("localized energy check skipped: zeta support ends after t_end");
    }
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, "run", cfg, wall, warnings, results, files);
  if (!opt.quiet) {
    std::cout << "run: " << cfg.step.steps() << " steps, outputs in " << dir.string() << '\n';
    for (const auto& w : warnings) std::cout << "warning: " << w << '\n';
  }
  return 0;
}

int command_sweep(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig cfg = load(opt);
  const SweepConfig sc = cfg.sweep.value_or(SweepConfig{});
  const Grid grid = cfg.make_grid();
  const Coefficients coeffs = cfg.make_coefficients();
  const SweepResult res =
      epsilon_sweep(cfg.make_initial(grid), coeffs, grid, cfg.step, sc.epsilons, sc.q);
  const fs::path dir = cfg.output.dir;
  std::vector<std::string> warnings = cfg.warnings;
  add_warnings(warnings, res.warnings);
  std::vector<std::string> files{"sweep.csv"};
  write_sweep_csv(dir / "sweep.csv", res);
  if (cfg.output.plots) {
    std::vector<double> eps(res.epsilons.begin() + 1, res.epsilons.end());
    for (double& e : eps) e = std::log10(e);
    write_line_plot_svg(dir / "sweep.svg", "consecutive distances", "log10 eps",
                        {{"d_v", eps, res.d_v},
                         {"d_u", eps, res.d_u},
                         {"d_theta", eps, res.d_theta},
                         {"d_flux", eps, res.d_flux}},
                        true);
    files.push_back("sweep.svg");
  }
  json results = {{"cauchy", res.cauchy}, {"strictly_decreasing", res.strictly_decreasing}};
  json orders = json::array();
  for (double o : res.order_v) orders.push_back(finite_or_null(o));
  results["order_v"] = orders;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, "sweep", cfg, wall, warnings, results, files);
  if (!opt.quiet) {
    std::cout << "sweep: " << res.epsilons.size() << " runs, strictly decreasing: "
              << (res.strictly_decreasing ? "yes" : "no") << '\n';
  }
  return 0;
}

int command_refine(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig cfg = load(opt);
  ManufacturedSolution mms;
  mms.length = cfg.grid.length;
  const RefinementTable table = refinement_study(mms, cfg.make_coefficients(), cfg.refine);
  const fs::path dir = cfg.output.dir;
  write_refinement_csv(dir / "refine.csv", table);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, "refine", cfg, wall, cfg.warnings,
                 {{"spatial_order", table.spatial_order},
                  {"temporal_order", table.temporal_order}},
                 {"refine.csv"});
  if (!opt.quiet) {
    for (std::size_t l = 0; l < table.spatial_order.size(); ++l) {
      std::cout << "levels " << l << "-" << l + 1 << ": spatial order " << table.spatial_order[l]
                << ", temporal order " << table.temporal_order[l] << '\n';
    }
  }
  return 0;
}

int command_check(const Options& opt) {
  const std::vector<CheckOutcome> results = invariant_battery();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    if (!opt.quiet || !r.pass) {
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    }
  }
  return all ? 0 : 2;
}

}  // namespace

std::vector<CheckOutcome> invariant_battery() {
  std::vector<CheckOutcome> out;
  using Check = CheckOutcome (*)();
  for (Check check : {check_zero_fixed_point, check_symmetry, check_theta_shift,
                      check_determinism, check_theta_nonnegative, check_energy_balance,
                      check_presets, check_operators, check_solver}) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({"check raised", false, e.what()});
    }
  }
  return out;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"viscotherm: 1D thermoviscoelastic simulator and diagnostics"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "YAML run configuration");
    sub->add_option("--out", opt.out, "output directory (overrides output.dir)");
    sub->add_flag("--quiet", opt.quiet, "suppress progress output");
    sub->add_option("--seed", seed, "random seed for random-seeded initial data")
        ->each([&](const std::string&) { opt.seed = seed; });
  };
  CLI::App* run_cmd = app.add_subcommand("run", "integrate one trajectory and run diagnostics");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "vanishing-regularisation sweep over eps");
  CLI::App* refine_cmd = app.add_subcommand("refine", "manufactured-solution refinement study");
  CLI::App* check_cmd = app.add_subcommand("check", "built-in invariant battery");
  for (CLI::App* sub : {run_cmd, sweep_cmd, refine_cmd, check_cmd}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    if (run_cmd->parsed()) return command_run(opt);
    if (sweep_cmd->parsed()) return command_sweep(opt);
    if (refine_cmd->parsed()) return command_refine(opt);
    return command_check(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace viscotherm
