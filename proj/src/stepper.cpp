#include "viscotherm/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "viscotherm/operators.hpp"

namespace viscotherm {

namespace {

BandedLU factor_u_system(const Grid& grid, const StepConfig& cfg, const BandedOperator& lap_d) {
  return BandedLU(BandedOperator::identity(grid.n()).combine(1.0, lap_d, -cfg.dt * cfg.epsilon));
}

BandedLU factor_theta_system(const Grid& grid, const StepConfig& cfg) {
  return BandedLU(
      BandedOperator::identity(grid.n()).combine(1.0, laplacian_neumann_operator(grid), -cfg.dt));
}

BandedOperator velocity_matrix(const Grid& grid, const StepConfig& cfg,
                               const BandedOperator& biharmonic, std::span<const double> gamma) {
  const BandedOperator flux = flux_divergence_operator(gamma, grid);
  BandedOperator m = BandedOperator::identity(grid.n(), 2).combine(1.0, biharmonic,
                                                                   cfg.dt * cfg.epsilon);
  m = m.combine(1.0, flux, -cfg.dt);
  m.set_identity_row(0);
  m.set_identity_row(grid.n() - 1);
  return m;
}

const StepConfig& validated(const StepConfig& cfg) {
  cfg.validate();
  return cfg;
}

bool all_finite(const std::vector<double>& f) {
  return std::all_of(f.begin(), f.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void StepConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("step: epsilon must lie in (0, 1]");
  }
  if (!(t_end >= dt * (1.0 - 1e-12))) throw std::invalid_argument("step: t_end must be >= dt");
  if (record_every < 1) throw std::invalid_argument("step: record_every must be >= 1");
  if (picard_iters < 1) throw std::invalid_argument("step: picard_iters must be >= 1");
}

long StepConfig::steps() const { return std::max(1L, std::lround(t_end / dt)); }

Integrator::Integrator(Grid grid, Coefficients coeffs, StepConfig cfg, Forcing forcing)
    : grid_(std::move(grid)),
      coeffs_(std::move(coeffs)),
      cfg_(validated(cfg)),
      forcing_(std::move(forcing)),
      lap_d_(laplacian_dirichlet_operator(grid_)),
      biharmonic_(biharmonic_navier_operator(grid_)),
      u_solver_(factor_u_system(grid_, cfg_, lap_d_)),
      theta_solver_(factor_theta_system(grid_, cfg_)) {
  if (!(coeffs_.a > 0.0)) throw std::invalid_argument("coefficients: a must be > 0");
  if (coeffs_.constant_gamma) {
    const std::vector<double> gamma(static_cast<std::size_t>(grid_.n()), coeffs_.gamma(0.0));
    v_solver_.emplace(velocity_matrix(grid_, cfg_, biharmonic_, gamma));
  }
}

Integrator::Increment Integrator::advance(const State& s, long step_index) const {
  Increment inc = advance_once(s, s.theta);
  for (int k = 1; k < cfg_.picard_iters; ++k) {
    inc = advance_once(s, inc.state.theta);
  }
  for (const auto* field : {&inc.state.v, &inc.state.u, &inc.state.theta}) {
    if (!all_finite(*field)) {
      std::ostringstream msg;
      msg << "non-finite value produced at step " << step_index << " (t = " << inc.state.t << ")";
      throw NumericalError(step_index, msg.str());
    }
  }
  if (cfg_.theta_clip) {
    std::vector<double> negative(inc.state.theta.size());
    for (std::size_t i = 0; i < negative.size(); ++i) {
      negative[i] = std::max(-inc.state.theta[i], 0.0);
      inc.state.theta[i] = std::max(inc.state.theta[i], 0.0);
    }
    inc.clamped_mass = trapezoid(negative, grid_);
  }
  return inc;
}

Integrator::Increment Integrator::advance_once(const State& s,
                                               std::span<const double> theta_coef) const {
  const int n = grid_.n();
  const auto nn = static_cast<std::size_t>(n);
  const double dt = cfg_.dt;
  const double t_next = s.t + dt;

  std::vector<double> gamma(nn), fval(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const double th = std::max(theta_coef[i], 0.0);
    gamma[i] = coeffs_.gamma(th);
    fval[i] = coeffs_.f(th);
  }

  std::vector<double> s_v, s_u, s_theta;
  if (forcing_) {
    s_v.assign(nn, 0.0);
    s_u.assign(nn, 0.0);
    s_theta.assign(nn, 0.0);
    forcing_(t_next, s_v, s_u, s_theta);
  }

  // (i) velocity
  const std::vector<double> lap_u = laplacian_dirichlet(s.u, grid_);
  const std::vector<double> df = d1_centered(fval, grid_);
  std::vector<double> rhs(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    rhs[i] = s.v[i] + dt * (coeffs_.a * lap_u[i] - df[i]);
    if (forcing_) rhs[i] += dt * s_v[i];
  }
  rhs.front() = rhs.back() = 0.0;
  std::vector<double> v_new;
  if (v_solver_) {
    v_new = v_solver_->solve(rhs);
  } else {
    v_new = BandedLU(velocity_matrix(grid_, cfg_, biharmonic_, gamma)).solve(rhs);
  }
  v_new.front() = v_new.back() = 0.0;

  // (ii) displacement
  for (std::size_t i = 0; i < nn; ++i) {
    rhs[i] = s.u[i] + dt * v_new[i];
    if (forcing_) rhs[i] += dt * s_u[i];
  }
  rhs.front() = rhs.back() = 0.0;
  std::vector<double> u_new = u_solver_.solve(rhs);
  u_new.front() = u_new.back() = 0.0;

  // (iii) temperature, heated by the fresh velocity
  const std::vector<double> heating = dissipation_density(gamma, v_new, grid_);
  const std::vector<double> strain_rate = d1_adjoint(v_new, grid_);
  for (std::size_t i = 0; i < nn; ++i) {
    rhs[i] = s.theta[i] + dt * (heating[i] - fval[i] * strain_rate[i]);
    if (forcing_) rhs[i] += dt * s_theta[i];
  }
  std::vector<double> theta_new = theta_solver_.solve(rhs);

  Increment inc;
  const std::vector<double> vxx = laplacian_dirichlet(v_new, grid_);
  const std::vector<double> uxx = laplacian_dirichlet(u_new, grid_);
  double sv = 0.0, su = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    sv += vxx[static_cast<std::size_t>(i)] * vxx[static_cast<std::size_t>(i)];
    su += uxx[static_cast<std::size_t>(i)] * uxx[static_cast<std::size_t>(i)];
  }
  // Boundary second differences are zero (v_xx = 0, u_xx = 0 there), so the
  // trapezoid sum reduces to the interior.
  inc.diss_vxx = dt * cfg_.epsilon * grid_.dx() * sv;
  inc.diss_uxx = dt * cfg_.epsilon * coeffs_.a * grid_.dx() * su;
  inc.state.t = t_next;
  inc.state.v = std::move(v_new);
  inc.state.u = std::move(u_new);
  inc.state.theta = std::move(theta_new);
  return inc;
}

State step(const State& state, const Coefficients& coeffs, const Grid& grid,
           const StepConfig& cfg) {
  grid.check_size(state.v, "step v");
  grid.check_size(state.u, "step u");
  grid.check_size(state.theta, "step theta");
  return Integrator(grid, coeffs, cfg).advance(state).state;
}

namespace {

Trajectory integrate(const InitialData& initial, const Coefficients& coeffs, const Grid& grid,
                     const StepConfig& cfg, const Forcing& forcing, const StateObserver& observer) {
  cfg.validate();
  initial.validate(grid);
  const long steps = cfg.steps();
  if (steps % cfg.record_every != 0) {
    throw std::invalid_argument("run: number of steps (" + std::to_string(steps) +
                                ") is not a multiple of record_every");
  }

  Trajectory traj;
  traj.grid = grid;
  traj.dt = cfg.dt;
  traj.record_every = cfg.record_every;
  traj.epsilon = cfg.epsilon;
  if (std::abs(steps * cfg.dt - cfg.t_end) > 1e-9 * cfg.t_end) {
    std::ostringstream msg;
    msg << "t_end " << cfg.t_end << " is not a multiple of dt; integrating to " << steps * cfg.dt;
    traj.warnings.push_back(msg.str());
  }
  if (cfg.record_every > 1) {
    traj.warnings.push_back("record_every > 1: time integrals in diagnostics use the coarse stride");
  }
  if (coeffs.alpha_warning()) {
    std::ostringstream msg;
    msg << "growth exponent alpha = " << coeffs.alpha << " >= 3/2 (outside the existence theory)";
    traj.warnings.push_back(msg.str());
  }

  const Integrator integrator(grid, coeffs, cfg, forcing);
  State current = initial.to_state();
  const bool keep = !observer;
  if (keep) traj.states.reserve(static_cast<std::size_t>(steps / cfg.record_every + 1));
  auto record = [&](double cv, double cu) {
    if (keep) {
      traj.states.push_back(current);
    } else {
      observer(current);
      if (traj.states.size() < 2) {
        traj.states.push_back(current);
      } else {
        traj.states.back() = current;
        traj.cum_diss_vxx.pop_back();
        traj.cum_diss_uxx.pop_back();
      }
    }
    traj.cum_diss_vxx.push_back(cv);
    traj.cum_diss_uxx.push_back(cu);
  };
  record(0.0, 0.0);
  traj.min_theta = *std::min_element(current.theta.begin(), current.theta.end());

  double cum_v = 0.0, cum_u = 0.0;
  for (long k = 1; k <= steps; ++k) {
    Integrator::Increment inc = integrator.advance(current, k);
    inc.state.t = static_cast<double>(k) * cfg.dt;
    cum_v += inc.diss_vxx;
    cum_u += inc.diss_uxx;
    traj.clamped_mass += inc.clamped_mass;
    current = std::move(inc.state);
    traj.min_theta = std::min(traj.min_theta,
                              *std::min_element(current.theta.begin(), current.theta.end()));
    if (k % cfg.record_every == 0) record(cum_v, cum_u);
  }
  if (traj.min_theta < 0.0) {
    std::ostringstream msg;
    msg << "theta undershoot: min theta = " << traj.min_theta;
    traj.warnings.push_back(msg.str());
  }
  if (traj.clamped_mass > 0.0) {
    std::ostringstream msg;
    msg << "theta_clip added mass " << traj.clamped_mass;
    traj.warnings.push_back(msg.str());
  }
  return traj;
}

}  // namespace

Trajectory run(const InitialData& initial, const Coefficients& coeffs, const Grid& grid,
               const StepConfig& cfg, const Forcing& forcing) {
  return integrate(initial, coeffs, grid, cfg, forcing, {});
}

Trajectory run_streaming(const InitialData& initial, const Coefficients& coeffs,
                         const Grid& grid, const StepConfig& cfg, const StateObserver& observer,
                         const Forcing& forcing) {
  if (!observer) throw std::invalid_argument("run_streaming: observer is empty");
  return integrate(initial, coeffs, grid, cfg, forcing, observer);
}

}  // namespace viscotherm
