#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles/oracles.hpp"
#include "viscotherm/convergence.hpp"

using namespace viscotherm;
constexpr double pi = std::numbers::pi;

namespace {

Coefficients coupled() {
  return coefficient_presets(std::vector<std::string>{"rational-visc", "linear-dilation"});
}

StepConfig cfg(double dt, double t_end, double eps = 1e-3) {
  StepConfig s;
  s.dt = dt;
  s.t_end = t_end;
  s.epsilon = eps;
  return s;
}

}  // namespace

TEST_CASE("distances are metrics") {
  const Grid g = make_grid(pi, 41);
  const InitialData init = initial_preset("sine-mode", g, {{"B", 0.3}});
  const Trajectory a = run(init, coupled(), g, cfg(1e-3, 0.2, 1e-1));
  const Trajectory b = run(init, coupled(), g, cfg(1e-3, 0.2, 1e-2));
  const Trajectory c = run(init, coupled(), g, cfg(1e-3, 0.2, 1e-3));
  const TrajectoryDistances ab = trajectory_distances(a, b, coupled());
  const TrajectoryDistances ba = trajectory_distances(b, a, coupled());
  const TrajectoryDistances bc = trajectory_distances(b, c, coupled());
  const TrajectoryDistances ac = trajectory_distances(a, c, coupled());
  const TrajectoryDistances aa = trajectory_distances(a, a, coupled());
  CHECK(ab.d_v == ba.d_v);
  CHECK(ab.d_theta == ba.d_theta);
  CHECK(ab.d_u == ba.d_u);
  CHECK(aa.d_v == 0.0);
  CHECK(aa.d_flux == 0.0);
  CHECK(ac.d_v <= ab.d_v + bc.d_v + 1e-12);
  CHECK(ac.d_u <= ab.d_u + bc.d_u + 1e-12);
  CHECK(ac.d_theta <= ab.d_theta + bc.d_theta + 1e-12);
  CHECK(ac.d_flux <= ab.d_flux + bc.d_flux + 1e-12);
  for (double q : {1.0, 1.5, 2.5}) {
    const double ab_q = trajectory_distances(a, b, coupled(), q).d_theta;
    const double bc_q = trajectory_distances(b, c, coupled(), q).d_theta;
    const double ac_q = trajectory_distances(a, c, coupled(), q).d_theta;
    CHECK(ac_q <= ab_q + bc_q + 1e-12);
  }
}

TEST_CASE("distance between a run and zero data is its norm") {
  const Grid g = make_grid(pi, 31);
  const Coefficients c = coefficient_presets("const");
  const Trajectory a = run(initial_preset("sine-mode", g, {{"c", 0.0}, {"d", 0.0}}), c, g, cfg(1e-3, 0.05));
  const Trajectory z = run(zero_initial_data(g), c, g, cfg(1e-3, 0.05));
  const TrajectoryDistances d = trajectory_distances(a, z, c);
  std::vector<double> per_t;
  double sup_u = 0.0;
  for (const State& s : a.states) {
    std::vector<double> v2(s.v.size());
    for (std::size_t i = 0; i < v2.size(); ++i) {
      v2[i] = s.v[i] * s.v[i];
      sup_u = std::max(sup_u, std::abs(s.u[i]));
    }
    per_t.push_back(oracle::trapezoid(v2, g.dx()));
  }
  CHECK(d.d_v == doctest::Approx(std::sqrt(oracle::trapezoid(per_t, 1e-3))));
  CHECK(d.d_u == sup_u);
}

TEST_CASE("distances reject mismatched lattices") {
  const Grid g = make_grid(pi, 21);
  const Trajectory a = run(zero_initial_data(g), coupled(), g, cfg(1e-3, 0.01));
  const Trajectory b = run(zero_initial_data(g), coupled(), g, cfg(1e-3, 0.02));
  const Grid h = make_grid(pi, 23);
  const Trajectory c = run(zero_initial_data(h), coupled(), h, cfg(1e-3, 0.01));
  CHECK_THROWS_AS(trajectory_distances(a, b, coupled()), std::invalid_argument);
  CHECK_THROWS_AS(trajectory_distances(a, c, coupled()), std::invalid_argument);
  CHECK_THROWS_AS(trajectory_distances(a, a, coupled(), 0.5), std::invalid_argument);
}

TEST_CASE("sweep needs three epsilons in decreasing order") {
  const Grid g = make_grid(pi, 21);
  const InitialData init = initial_preset("sine-mode", g);
  try {
    epsilon_sweep(init, coupled(), g, cfg(1e-3, 0.01), {1e-3});
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "sweep requires ≥ 3 epsilons");
  }
  CHECK_THROWS_AS(epsilon_sweep(init, coupled(), g, cfg(1e-3, 0.01), {1e-3, 1e-2, 1e-4}),
                  std::invalid_argument);
}

TEST_CASE("repeated epsilon gives zero distances") {
  const Grid g = make_grid(pi, 31);
  const SweepResult r = epsilon_sweep(initial_preset("sine-mode", g), coupled(), g, cfg(1e-3, 0.1),
                                      {1e-3, 1e-3, 1e-3});
  for (std::size_t j = 0; j < r.d_v.size(); ++j) {
    CHECK(r.d_v[j] == 0.0);
    CHECK(r.d_u[j] == 0.0);
    CHECK(r.d_theta[j] == 0.0);
    CHECK(r.d_flux[j] == 0.0);
  }
  CHECK(r.cauchy);
  CHECK_FALSE(r.strictly_decreasing);
}

TEST_CASE("decoupled sweep has strictly decreasing velocity distances") {
  const Grid g = make_grid(pi, 61);
  const Coefficients c = coefficient_presets("const");
  const SweepResult r = epsilon_sweep(initial_preset("sine-mode", g), c, g, cfg(5e-4, 0.5),
                                      {1e-2, 1e-3, 1e-4});
  REQUIRE(r.d_v.size() == 2);
  CHECK(r.d_v[1] < r.d_v[0]);
  // A regular perturbation in eps: the distance ratio tracks the eps gaps (9e-3 vs 9e-4).
  CHECK(r.d_v[0] / r.d_v[1] == doctest::Approx(10.0).epsilon(0.2));
}

TEST_CASE("manufactured forcing matches finite differences of the exact fields") {
  ManufacturedSolution m;
  m.length = pi;
  const Coefficients c = coupled();
  const double eps = 0.05;
  const Grid g = make_grid(pi, 11);
  const Forcing f = m.forcing(g, c, eps);
  const double t = 0.37;
  std::vector<double> sv(11), su(11), st(11);
  f(t, sv, su, st);
  const double h = 1e-3;
  for (int i = 1; i < 10; ++i) {
    const double x = g.x(i);
    auto dx = [&](auto fn, double xx) { return (fn(xx + h) - fn(xx - h)) / (2 * h); };
    auto V = [&](double xx) { return m.v(xx, t); };
    auto U = [&](double xx) { return m.u(xx, t); };
    auto T = [&](double xx) { return m.theta(xx, t); };
    const double v_t = (m.v(x, t + h) - m.v(x, t - h)) / (2 * h);
    const double u_t = (m.u(x, t + h) - m.u(x, t - h)) / (2 * h);
    const double th_t = (m.theta(x, t + h) - m.theta(x, t - h)) / (2 * h);
    const double v_xxxx = (V(x + 2 * h) - 4 * V(x + h) + 6 * V(x) - 4 * V(x - h) + V(x - 2 * h)) / std::pow(h, 4);
    auto flux = [&](double xx) { return c.gamma(T(xx)) * dx(V, xx); };
    const double div = dx(flux, x);
    const double u_xx = (U(x + h) - 2 * U(x) + U(x - h)) / (h * h);
    const double th_xx = (T(x + h) - 2 * T(x) + T(x - h)) / (h * h);
    auto F = [&](double xx) { return c.f(T(xx)); };
    const double vx = dx(V, x);
    const double sv_ref = v_t + eps * v_xxxx - div - c.a * u_xx + dx(F, x);
    const double su_ref = u_t - eps * u_xx - m.v(x, t);
    const double st_ref = th_t - th_xx - c.gamma(T(x)) * vx * vx + c.f(T(x)) * vx;
    const auto k = static_cast<std::size_t>(i);
    CHECK(sv[k] == doctest::Approx(sv_ref).epsilon(1e-4).scale(1.0));
    CHECK(su[k] == doctest::Approx(su_ref).epsilon(1e-5).scale(1.0));
    CHECK(st[k] == doctest::Approx(st_ref).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("manufactured solution satisfies the boundary conditions") {
  ManufacturedSolution m;
  m.length = 2.0;
  for (double t : {0.0, 0.3, 1.1}) {
    CHECK(std::abs(m.v(0.0, t)) <= 1e-15);
    CHECK(std::abs(m.u(2.0, t)) <= 1e-15);
    const double h = 1e-6;
    CHECK(std::abs(m.theta(h, t) - m.theta(0.0, t)) <= 1e-10);
    CHECK(m.theta(1.0, t) > 0.0);
  }
}

TEST_CASE("refinement study of the zero solution has zero errors") {
  const RefinementTable t = refinement_study(ManufacturedSolution::zero(pi), coupled(), RefinementConfig{});
  REQUIRE(t.levels.size() == 3);
  for (const auto& l : t.levels) CHECK(l.err_max == 0.0);
}

TEST_CASE("refinement study orders") {
  ManufacturedSolution m;
  m.length = pi;
  RefinementConfig rc;
  rc.t_end = 0.25;
  const RefinementTable t = refinement_study(m, coupled(), rc);
  REQUIRE(t.spatial_order.size() == 2);
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(t.spatial_order[l] >= 1.9);
    CHECK(t.temporal_order[l] >= 0.9);
    CHECK(t.levels[l + 1].err_max < t.levels[l].err_max);
  }
  CHECK_THROWS_AS(refinement_study(m, coupled(), RefinementConfig{2}), std::invalid_argument);
}

TEST_CASE("decay rate error halves with dt") {
  const Grid g = make_grid(pi, 101);
  const Coefficients c = coefficient_presets("const");
  StepConfig base = cfg(1e-3, 2.0, 1e-6);
  const auto [l1, l2] = oracle::mode_exponents(1.0, 1.0, 1e-6, oracle::discrete_k2(1.0, g.dx()));
  const auto levels = decay_rate_study(c, g, base, {4e-3, 2e-3, 1e-3}, -l1.real(), std::abs(l1.imag()));
  REQUIRE(levels.size() == 3);
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    const double ratio = levels[l].rate_error / levels[l + 1].rate_error;
    CHECK(ratio >= 1.6);
    CHECK(ratio <= 2.4);
  }
}

TEST_CASE("fit_mode recovers a synthetic damped oscillation") {
  const Grid g = make_grid(pi, 21);
  Trajectory tr;
  tr.grid = g;
  tr.dt = 1e-2;
  for (int k = 0; k <= 300; ++k) {
    State s;
    s.t = k * 1e-2;
    s.v.assign(21, 0.0);
    s.theta.assign(21, 0.0);
    s.u.resize(21);
    const double amp = std::exp(-0.3 * s.t) * std::cos(2.0 * s.t + 0.4);
    for (int i = 0; i < 21; ++i) s.u[static_cast<std::size_t>(i)] = amp * std::sin(3 * g.x(i));
    tr.states.push_back(std::move(s));
  }
  const ModeFit fit = fit_mode(tr, 3, 5);
  CHECK(fit.oscillatory);
  CHECK(fit.decay_rate == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(fit.angular_frequency == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("runs are bit-identical") {
  const Grid g = make_grid(pi, 41);
  const InitialData init = initial_preset("random-seeded", g, {}, 77);
  const Trajectory a = run(init, coupled(), g, cfg(1e-3, 0.1));
  const Trajectory b = run(init, coupled(), g, cfg(1e-3, 0.1));
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    CHECK(a.states[k].v == b.states[k].v);
    CHECK(a.states[k].u == b.states[k].u);
    CHECK(a.states[k].theta == b.states[k].theta);
  }
  CHECK(a.cum_diss_vxx == b.cum_diss_vxx);
}

TEST_CASE("weak residual study streams each level") {
  StepConfig base = cfg(2e-3, 0.5);
  const WeakRefinementTable t = weak_residual_study(
      [](const Grid& g) { return initial_preset("sine-mode", g); }, coupled(), pi, 21, base, 2);
  REQUIRE(t.levels.size() == 2);
  CHECK(t.levels[1].n_nodes == 41);
  CHECK(t.levels[1].dt == doctest::Approx(1e-3));
  CHECK(t.levels[0].report.rows.size() == 12);
  CHECK(t.order_wu.size() == 1);
}
