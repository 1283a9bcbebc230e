#include "viscotherm/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "viscotherm/operators.hpp"

namespace viscotherm {

namespace {

void require_comparable(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("distances: trajectories on different grids");
  if (a.states.size() != b.states.size() || a.record_spacing() != b.record_spacing()) {
    throw std::invalid_argument("distances: trajectories on different time lattices");
  }
}

std::vector<double> flux_field(const State& s, const Coefficients& c, const Grid& g) {
  std::vector<double> out = d1_centered(s.v, g);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] *= std::sqrt(c.gamma(std::max(s.theta[i], 0.0)));
  }
  return out;
}

double log_ratio_order(double coarse, double fine, double ratio) {
  if (coarse <= 0.0 || fine <= 0.0) return 0.0;
  return std::log(coarse / fine) / std::log(ratio);
}

}  // namespace

TrajectoryDistances trajectory_distances(const Trajectory& a, const Trajectory& b,
                                         const Coefficients& coeffs, double q) {
  require_comparable(a, b);
  if (!(q >= 1.0)) throw std::invalid_argument("distances: q must be >= 1");
  const Grid& g = a.grid;
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<double> sv, st, sf;
  std::vector<double> wv(n), wt(n), wf(n);
  TrajectoryDistances d;
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    const State& sa = a.states[k];
    const State& sb = b.states[k];
    const std::vector<double> fa = flux_field(sa, coeffs, g);
    const std::vector<double> fb = flux_field(sb, coeffs, g);
    for (std::size_t i = 0; i < n; ++i) {
      const double dv = sa.v[i] - sb.v[i];
      wv[i] = dv * dv;
      wt[i] = std::pow(std::abs(sa.theta[i] - sb.theta[i]), q);
      const double dflux = fa[i] - fb[i];
      wf[i] = dflux * dflux;
      d.d_u = std::max(d.d_u, std::abs(sa.u[i] - sb.u[i]));
    }
    sv.push_back(trapezoid(wv, g));
    st.push_back(trapezoid(wt, g));
    sf.push_back(trapezoid(wf, g));
  }
  const double h = a.record_spacing();
  d.d_v = std::sqrt(trapezoid_uniform(sv, h));
  d.d_theta = std::pow(trapezoid_uniform(st, h), 1.0 / q);
  d.d_flux = std::sqrt(trapezoid_uniform(sf, h));
  return d;
}

SweepResult epsilon_sweep(const InitialData& initial, const Coefficients& coeffs,
                          const Grid& grid, const StepConfig& cfg,
                          const std::vector<double>& epsilons, double q) {
  if (epsilons.size() < 3) throw std::invalid_argument("sweep requires ≥ 3 epsilons");
  for (std::size_t j = 0; j + 1 < epsilons.size(); ++j) {
    if (epsilons[j + 1] > epsilons[j]) {
      throw std::invalid_argument("sweep: epsilons must be listed in decreasing order");
    }
  }
  SweepResult res;
  res.epsilons = epsilons;
  res.q = q;
  std::optional<Trajectory> previous;
  for (double eps : epsilons) {
    StepConfig c = cfg;
    c.epsilon = eps;
    Trajectory current = run(initial, coeffs, grid, c);
    for (const auto& w : current.warnings) {
      if (std::find(res.warnings.begin(), res.warnings.end(), w) == res.warnings.end()) {
        res.warnings.push_back(w);
      }
    }
    if (previous) {
      const TrajectoryDistances d = trajectory_distances(*previous, current, coeffs, q);
      res.d_v.push_back(d.d_v);
      res.d_u.push_back(d.d_u);
      res.d_theta.push_back(d.d_theta);
      res.d_flux.push_back(d.d_flux);
    }
    previous = std::move(current);
  }
  for (std::size_t j = 0; j + 1 < res.d_v.size(); ++j) {
    const double ratio = epsilons[j] / epsilons[j + 1];
    res.order_v.push_back(ratio == 1.0 ? 0.0 : log_ratio_order(res.d_v[j], res.d_v[j + 1], ratio));
  }
  auto monotone = [](const std::vector<double>& d, bool strict) {
    for (std::size_t j = 0; j + 1 < d.size(); ++j) {
      if (strict ? !(d[j + 1] < d[j]) : !(d[j + 1] <= d[j])) return false;
    }
    return true;
  };
  res.cauchy = monotone(res.d_v, false) && monotone(res.d_u, false) &&
               monotone(res.d_theta, false) && monotone(res.d_flux, false);
  res.strictly_decreasing = monotone(res.d_v, true) && monotone(res.d_u, true) &&
                            monotone(res.d_theta, true) && monotone(res.d_flux, true);
  return res;
}

// ---------------------------------------------------------------------------

double ManufacturedSolution::v(double x, double t) const {
  return amp_v * std::cos(omega * t) * std::sin(std::numbers::pi * x / length);
}

double ManufacturedSolution::u(double x, double t) const {
  return amp_u * (1.0 + std::sin(omega * t)) * std::sin(std::numbers::pi * x / length);
}

double ManufacturedSolution::theta(double x, double t) const {
  return theta_mean + theta_amp * std::cos(omega * t) * std::cos(std::numbers::pi * x / length);
}

ManufacturedSolution ManufacturedSolution::zero(double length) {
  ManufacturedSolution m;
  m.length = length;
  m.amp_v = m.amp_u = m.theta_mean = m.theta_amp = 0.0;
  return m;
}

InitialData ManufacturedSolution::initial(const Grid& grid) const {
  InitialData d = zero_initial_data(grid);
  for (int i = 0; i < grid.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    d.u0[k] = u(grid.x(i), 0.0);
    d.u0t[k] = v(grid.x(i), 0.0);
    d.theta0[k] = theta(grid.x(i), 0.0);
  }
  d.u0.front() = d.u0.back() = d.u0t.front() = d.u0t.back() = 0.0;
  return d;
}

Forcing ManufacturedSolution::forcing(const Grid& grid, const Coefficients& c,
                                      double epsilon) const {
  const ManufacturedSolution m = *this;
  return [m, grid, c, epsilon](double t, std::span<double> s_v, std::span<double> s_u,
                               std::span<double> s_theta) {
    const double k = std::numbers::pi / m.length;
    const double tv = m.amp_v * std::cos(m.omega * t);
    const double tv_t = -m.amp_v * m.omega * std::sin(m.omega * t);
    const double tu = m.amp_u * (1.0 + std::sin(m.omega * t));
    const double tu_t = m.amp_u * m.omega * std::cos(m.omega * t);
    const double tth = m.theta_amp * std::cos(m.omega * t);
    const double tth_t = -m.theta_amp * m.omega * std::sin(m.omega * t);
    for (int i = 0; i < grid.n(); ++i) {
      const double x = grid.x(i);
      const double sn = std::sin(k * x), cs = std::cos(k * x);
      const double v = tv * sn, v_t = tv_t * sn, v_x = tv * k * cs, v_xx = -k * k * tv * sn;
      const double v_xxxx = k * k * k * k * tv * sn;
      const double u_t = tu_t * sn, u_xx = -k * k * tu * sn;
      const double th = m.theta_mean + tth * cs, th_t = tth_t * cs;
      const double th_x = -k * tth * sn, th_xx = -k * k * tth * cs;
      const double g = c.gamma(th), gp = c.gamma_prime(th);
      const double f = c.f(th), fp = c.f_prime(th);
      const auto j = static_cast<std::size_t>(i);
      s_v[j] = v_t + epsilon * v_xxxx - (gp * th_x * v_x + g * v_xx) - c.a * u_xx + fp * th_x;
      s_u[j] = u_t - epsilon * u_xx - v;
      s_theta[j] = th_t - th_xx - g * v_x * v_x + f * v_x;
    }
  };
}

RefinementTable refinement_study(const ManufacturedSolution& mms, const Coefficients& coeffs,
                                 const RefinementConfig& cfg) {
  if (cfg.levels < 3) throw std::invalid_argument("refinement_study: need at least 3 levels");
  if (cfg.n0 < 5) throw std::invalid_argument("refinement_study: n0 must be >= 5");
  RefinementTable table;
  for (int l = 0; l < cfg.levels; ++l) {
    const int intervals = (cfg.n0 - 1) << l;
    const Grid grid = make_grid(mms.length, intervals + 1);
    StepConfig sc;
    sc.dt = cfg.dt0 / std::pow(cfg.dt_ratio, l);
    sc.t_end = cfg.t_end;
    sc.epsilon = cfg.epsilon;
    sc.record_every = static_cast<int>(sc.steps());
    const Trajectory traj =
        run(mms.initial(grid), coeffs, grid, sc, mms.forcing(grid, coeffs, cfg.epsilon));
    const State& fin = traj.states.back();
    RefinementLevel lev;
    lev.n_nodes = grid.n();
    lev.dx = grid.dx();
    lev.dt = sc.dt;
    for (int i = 0; i < grid.n(); ++i) {
      const auto j = static_cast<std::size_t>(i);
      const double x = grid.x(i);
      lev.err_v = std::max(lev.err_v, std::abs(fin.v[j] - mms.v(x, fin.t)));
      lev.err_u = std::max(lev.err_u, std::abs(fin.u[j] - mms.u(x, fin.t)));
      lev.err_theta = std::max(lev.err_theta, std::abs(fin.theta[j] - mms.theta(x, fin.t)));
    }
    lev.err_max = std::max({lev.err_v, lev.err_u, lev.err_theta});
    table.levels.push_back(lev);
  }
  for (std::size_t l = 0; l + 1 < table.levels.size(); ++l) {
    const double spatial =
        log_ratio_order(table.levels[l].err_max, table.levels[l + 1].err_max, 2.0);
    table.spatial_order.push_back(spatial);
    table.temporal_order.push_back(spatial / std::log2(cfg.dt_ratio));
  }
  return table;
}

WeakRefinementTable weak_residual_study(const std::function<InitialData(const Grid&)>& initial,
                                        const Coefficients& coeffs, double length, int n0,
                                        const StepConfig& base, int levels) {
  if (levels < 2) throw std::invalid_argument("weak_residual_study: need at least 2 levels");
  if (base.record_every != 1) {
    throw std::invalid_argument("weak_residual_study: record_every must be 1");
  }
  WeakRefinementTable table;
  for (int l = 0; l < levels; ++l) {
    const Grid grid = make_grid(length, ((n0 - 1) << l) + 1);
    StepConfig sc = base;
    sc.dt = base.dt / static_cast<double>(1 << l);
    WeakResidualAccumulator acc(grid, coeffs, sc.epsilon, sc.dt,
                                standard_battery(length, sc.t_end));
    run_streaming(initial(grid), coeffs, grid, sc, [&acc](const State& s) { acc.observe(s); });
    WeakRefinementLevel lev;
    lev.n_nodes = grid.n();
    lev.dt = sc.dt;
    lev.report = acc.report();
    lev.max_wu = lev.report.max_abs_wu();
    lev.max_wt = lev.report.max_abs_wt();
    table.levels.push_back(std::move(lev));
  }
  for (std::size_t l = 0; l + 1 < table.levels.size(); ++l) {
    table.order_wu.push_back(
        log_ratio_order(table.levels[l].max_wu, table.levels[l + 1].max_wu, 2.0));
    table.order_wt.push_back(
        log_ratio_order(table.levels[l].max_wt, table.levels[l + 1].max_wt, 2.0));
  }
  return table;
}

// ---------------------------------------------------------------------------

ModeFit fit_mode(const Trajectory& traj, int mode, int stride) {
  const Grid& g = traj.grid;
  const double h = traj.record_spacing();
  if (stride <= 0) stride = std::max(1, static_cast<int>(std::lround(0.05 / h)));
  std::vector<double> shape(static_cast<std::size_t>(g.n()));
  for (int i = 0; i < g.n(); ++i) {
    shape[static_cast<std::size_t>(i)] = std::sin(mode * std::numbers::pi * g.x(i) / g.length());
  }
  std::vector<double> amp;
  for (std::size_t k = 0; k < traj.states.size(); k += static_cast<std::size_t>(stride)) {
    std::vector<double> prod(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) prod[i] = traj.states[k].u[i] * shape[i];
    amp.push_back(2.0 / g.length() * trapezoid(prod, g));
  }
  if (amp.size() < 4) throw std::invalid_argument("fit_mode: trajectory too short for the stride");

  // Normal equations for a_{k+2} = c1 a_{k+1} + c0 a_k.
  double s11 = 0, s10 = 0, s00 = 0, r1 = 0, r0 = 0;
  for (std::size_t k = 0; k + 2 < amp.size(); ++k) {
    s11 += amp[k + 1] * amp[k + 1];
    s10 += amp[k + 1] * amp[k];
    s00 += amp[k] * amp[k];
    r1 += amp[k + 2] * amp[k + 1];
    r0 += amp[k + 2] * amp[k];
  }
  const double det = s11 * s00 - s10 * s10;
  if (!(std::abs(det) > 0.0)) throw std::runtime_error("fit_mode: degenerate amplitude history");
  const double c1 = (r1 * s00 - r0 * s10) / det;
  const double c0 = (s11 * r0 - s10 * r1) / det;

  const std::complex<double> disc = std::sqrt(std::complex<double>(c1 * c1 + 4.0 * c0, 0.0));
  const std::complex<double> z1 = 0.5 * (c1 + disc);
  const std::complex<double> z2 = 0.5 * (c1 - disc);
  const double span = stride * h;
  ModeFit fit;
  const std::complex<double> lam1 = std::log(z1) / span;
  const std::complex<double> lam2 = std::log(z2) / span;
  fit.oscillatory = c1 * c1 + 4.0 * c0 < 0.0;
  if (fit.oscillatory) {
    fit.decay_rate = -lam1.real();
    fit.angular_frequency = std::abs(lam1.imag());
  } else {
    // Overdamped: report the slower of the two decay rates.
    fit.decay_rate = std::min(-lam1.real(), -lam2.real());
    fit.angular_frequency = 0.0;
  }
  return fit;
}

std::vector<DecayRateLevel> decay_rate_study(const Coefficients& coeffs, const Grid& grid,
                                             const StepConfig& base,
                                             const std::vector<double>& dts,
                                             double reference_decay, double reference_frequency) {
  std::vector<DecayRateLevel> out;
  for (double dt : dts) {
    StepConfig c = base;
    c.dt = dt;
    InitialData init = zero_initial_data(grid);
    for (int i = 0; i < grid.n(); ++i) {
      init.u0[static_cast<std::size_t>(i)] = std::sin(std::numbers::pi * grid.x(i) / grid.length());
    }
    init.u0.front() = init.u0.back() = 0.0;
    const Trajectory traj = run(init, coeffs, grid, c);
    DecayRateLevel lev;
    lev.dt = dt;
    lev.fit = fit_mode(traj, 1, static_cast<int>(std::lround(0.05 / dt)));
    lev.rate_error = std::abs(lev.fit.decay_rate - reference_decay);
    lev.frequency_error = std::abs(lev.fit.angular_frequency - reference_frequency);
    out.push_back(lev);
  }
  return out;
}

}  // namespace viscotherm
