#include "viscotherm/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "viscotherm/operators.hpp"

namespace viscotherm {

namespace {

struct NodalCoefficients {
  std::vector<double> gamma;
  std::vector<double> f;
};

NodalCoefficients evaluate(const Coefficients& c, const std::vector<double>& theta) {
  NodalCoefficients out;
  out.gamma.resize(theta.size());
  out.f.resize(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double th = std::max(theta[i], 0.0);
    out.gamma[i] = c.gamma(th);
    out.f[i] = c.f(th);
  }
  return out;
}

double square_integral(const std::vector<double>& f, const Grid& g) {
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return trapezoid(sq, g);
}

double product_integral(const std::vector<double>& a, const std::vector<double>& b,
                        const Grid& g) {
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return trapezoid(prod, g);
}

double kinetic(const State& s, const Grid& g) { return 0.5 * square_integral(s.v, g); }

double elastic(const State& s, const Grid& g, double a) {
  return 0.5 * a * gradient_energy(s.u, g);
}

// int gamma v_x^2 in the form the heat source receives it.
double viscous_power(const std::vector<double>& gamma, const std::vector<double>& v,
                     const Grid& g) {
  return trapezoid(dissipation_density(gamma, v, g), g);
}

// int f v_x with the adjoint derivative, matching the dilation term of the momentum balance.
double dilation_power(const std::vector<double>& f, const std::vector<double>& v, const Grid& g) {
  return product_integral(f, d1_adjoint(v, g), g);
}

void require_states(const Trajectory& traj, const char* what) {
  if (traj.states.empty()) {
    throw std::invalid_argument(std::string(what) + ": trajectory has no states");
  }
  if (traj.cum_diss_vxx.size() != traj.states.size() ||
      traj.cum_diss_uxx.size() != traj.states.size()) {
    throw std::invalid_argument(std::string(what) + ": dissipation records do not match states");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

double EnergyReport::max_balance_residual() const {
  double m = 0.0;
  for (double r : balance_residual) m = std::max(m, r);
  return m;
}

EnergyReport energy_ledger(const Trajectory& traj, const Coefficients& coeffs) {
  require_states(traj, "energy_ledger");
  const Grid& g = traj.grid;
  EnergyReport rep;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const State& s = traj.states[k];
    rep.t.push_back(s.t);
    rep.kinetic.push_back(kinetic(s, g));
    rep.elastic.push_back(elastic(s, g, coeffs.a));
    rep.thermal.push_back(trapezoid(s.theta, g));
    rep.total.push_back(rep.kinetic.back() + rep.elastic.back() + rep.thermal.back());
    rep.cum_diss_vxx.push_back(traj.cum_diss_vxx[k]);
    rep.cum_diss_uxx.push_back(traj.cum_diss_uxx[k]);
    rep.balance_residual.push_back(std::abs(rep.total.back() + traj.cum_diss_vxx[k] +
                                            traj.cum_diss_uxx[k] - rep.total.front()));
  }
  return rep;
}

std::vector<double> a_priori_ratios(const EnergyReport& r) {
  const double e0 = r.initial_total();
  std::vector<double> out(5, 0.0);
  if (e0 == 0.0) return out;
  const std::vector<const std::vector<double>*> columns = {&r.kinetic, &r.elastic, &r.thermal,
                                                           &r.cum_diss_vxx, &r.cum_diss_uxx};
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (double value : *columns[c]) out[c] = std::max(out[c], value / e0);
  }
  return out;
}

IdentityResidual testing_identity_residual(const Trajectory& traj, const Coefficients& coeffs) {
  require_states(traj, "testing_identity_residual");
  const Grid& g = traj.grid;
  const double h = traj.record_spacing();
  const double eps = traj.epsilon;
  IdentityResidual out;
  double mech_prev = kinetic(traj.states[0], g) + elastic(traj.states[0], g, coeffs.a);
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    const State& now = traj.states[k];
    const State& next = traj.states[k + 1];
    const double mech_next = kinetic(next, g) + elastic(next, g, coeffs.a);
    const NodalCoefficients c = evaluate(coeffs, now.theta);
    const double reg = eps * square_integral(laplacian_dirichlet(next.v, g), g) +
                       eps * coeffs.a * square_integral(laplacian_dirichlet(next.u, g), g);
    const double r = (mech_next - mech_prev) / h + viscous_power(c.gamma, next.v, g) + reg -
                     dilation_power(c.f, next.v, g);
    out.t.push_back(next.t);
    out.residual.push_back(r);
    out.max_abs = std::max(out.max_abs, std::abs(r));
    mech_prev = mech_next;
  }
  return out;
}

// ---------------------------------------------------------------------------

EstimateReport estimate_integrals(const Trajectory& traj, double p, double q, double r) {
  require_states(traj, "estimate_integrals");
  const Grid& g = traj.grid;
  EstimateReport rep;
  rep.p = p;
  rep.q = q;
  rep.r = r;
  auto warn = [&rep](const std::string& msg) { rep.warnings.push_back(msg); };
  if (!(p > 0.0 && p < 1.0)) warn("p = " + std::to_string(p) + " outside (0, 1)");
  if (!(q > 0.0 && q < 3.0)) warn("q = " + std::to_string(q) + " outside (0, 3)");
  if (!(r >= 1.0 && r < 1.5)) warn("r = " + std::to_string(r) + " outside [1, 3/2)");

  const auto n = static_cast<std::size_t>(g.n());
  std::vector<double> s5, s6, s7, s8;
  std::vector<double> w5(n), w6(n), w7(n), w8(n);
  for (const State& s : traj.states) {
    const std::vector<double> th_x = d1_centered(s.theta, g);
    const std::vector<double> v_x = d1_centered(s.v, g);
    for (std::size_t i = 0; i < n; ++i) {
      const double base = std::max(s.theta[i], 0.0) + 1.0;
      w5[i] = std::pow(base, p - 2.0) * th_x[i] * th_x[i];
      w6[i] = std::pow(base, q);
      w7[i] = std::pow(std::abs(th_x[i]), r);
      w8[i] = v_x[i] * v_x[i];
    }
    s5.push_back(trapezoid(w5, g));
    s6.push_back(trapezoid(w6, g));
    s7.push_back(trapezoid(w7, g));
    s8.push_back(trapezoid(w8, g));
    rep.t.push_back(s.t);
    rep.mass.push_back(trapezoid(s.theta, g));
    rep.l2_v.push_back(square_integral(s.v, g));
    rep.l2_ux.push_back(square_integral(d1_centered(s.u, g), g));
  }
  const double h = traj.record_spacing();
  rep.i5 = trapezoid_uniform(s5, h);
  rep.i6 = trapezoid_uniform(s6, h);
  rep.i7 = trapezoid_uniform(s7, h);
  rep.i8 = trapezoid_uniform(s8, h);
  return rep;
}

// ---------------------------------------------------------------------------

CutoffZeta::CutoffZeta(double plateau_end, double support_end) : t0_(plateau_end), t1_(support_end) {
  if (!(plateau_end >= 0.0 && support_end > plateau_end)) {
    throw std::invalid_argument("CutoffZeta: need 0 <= T0 < T1");
  }
}

double CutoffZeta::operator()(double t) const {
  if (t <= t0_) return 1.0;
  if (t >= t1_) return 0.0;
  const double s = (t - t0_) / (t1_ - t0_);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double CutoffZeta::derivative(double t) const {
  if (t <= t0_ || t >= t1_) return 0.0;
  const double s = (t - t0_) / (t1_ - t0_);
  return -30.0 * s * s * (1.0 - s) * (1.0 - s) / (t1_ - t0_);
}

double localized_energy_slack(const Trajectory& traj, const Coefficients& coeffs,
                              const CutoffZeta& zeta) {
  require_states(traj, "localized_energy_slack");
  if (traj.t_end() < zeta.support_end() * (1.0 - 1e-12)) {
    throw std::invalid_argument("localized_energy_slack: trajectory ends before T1");
  }
  const Grid& g = traj.grid;
  std::vector<double> visc, mech, dil, z, dz;
  for (const State& s : traj.states) {
    const NodalCoefficients c = evaluate(coeffs, s.theta);
    visc.push_back(viscous_power(c.gamma, s.v, g));
    dil.push_back(dilation_power(c.f, s.v, g));
    mech.push_back(kinetic(s, g) + elastic(s, g, coeffs.a));
    z.push_back(zeta(s.t));
    dz.push_back(zeta.derivative(s.t));
  }
  std::vector<double> integrand(traj.states.size());
  for (std::size_t k = 0; k < integrand.size(); ++k) {
    integrand[k] = z[k] * visc[k] - dz[k] * mech[k] - z[k] * dil[k];
  }
  return trapezoid_uniform(integrand, traj.record_spacing()) - mech.front();
}

double localized_regularization_loss(const Trajectory& traj, const Coefficients& coeffs,
                                     const CutoffZeta& zeta) {
  require_states(traj, "localized_regularization_loss");
  const Grid& g = traj.grid;
  std::vector<double> integrand;
  for (const State& s : traj.states) {
    const double reg = square_integral(laplacian_dirichlet(s.v, g), g) +
                       coeffs.a * square_integral(laplacian_dirichlet(s.u, g), g);
    integrand.push_back(zeta(s.t) * traj.epsilon * reg);
  }
  return trapezoid_uniform(integrand, traj.record_spacing());
}

// ---------------------------------------------------------------------------

double TestFunction::psi(double x) const {
  if (profile == Profile::Constant) return weight;
  const double s = (2.0 * x - length) / (rho * length);
  const double w = 1.0 - s * s;
  return w > 0.0 ? weight * w * w * w : 0.0;
}

double TestFunction::psi_x(double x) const {
  if (profile == Profile::Constant) return 0.0;
  const double ds = 2.0 / (rho * length);
  const double s = (2.0 * x - length) / (rho * length);
  const double w = 1.0 - s * s;
  return w > 0.0 ? weight * 3.0 * w * w * (-2.0 * s) * ds : 0.0;
}

double TestFunction::psi_xx(double x) const {
  if (profile == Profile::Constant) return 0.0;
  const double ds = 2.0 / (rho * length);
  const double s = (2.0 * x - length) / (rho * length);
  const double w = 1.0 - s * s;
  // d^2/ds^2 (1-s^2)^3 = -6 (1-s^2)^2 + 24 s^2 (1-s^2)
  return w > 0.0 ? weight * (-6.0 * w * w + 24.0 * s * s * w) * ds * ds : 0.0;
}

double TestFunction::chi(double t) const {
  const double s = t / tau;
  const double w = 1.0 - s * s;
  return w > 0.0 ? w * w * w : 0.0;
}

double TestFunction::chi_t(double t) const {
  const double s = t / tau;
  const double w = 1.0 - s * s;
  return w > 0.0 ? 3.0 * w * w * (-2.0 * s) / tau : 0.0;
}

std::vector<TestFunction> standard_battery(double length, double t_end) {
  std::vector<TestFunction> out;
  const double taus[] = {0.25, 0.5, 0.9};
  for (double rho : {0.5, 0.8, 1.0}) {
    for (double tau : taus) {
      TestFunction tf;
      tf.profile = TestFunction::Profile::Bump;
      tf.rho = rho;
      tf.tau = tau * t_end;
      tf.length = length;
      std::ostringstream id;
      id << "bump_rho" << rho << "_tau" << tau;
      tf.id = id.str();
      out.push_back(tf);
    }
  }
  for (double tau : taus) {
    TestFunction tf;
    tf.profile = TestFunction::Profile::Constant;
    tf.rho = 0.0;
    tf.tau = tau * t_end;
    tf.length = length;
    std::ostringstream id;
    id << "const_tau" << tau;
    tf.id = id.str();
    out.push_back(tf);
  }
  return out;
}

double WeakResidualReport::max_abs_wu() const {
  double m = 0.0;
  for (const auto& r : rows) {
    if (r.has_momentum) m = std::max(m, std::abs(r.wu));
  }
  return m;
}

double WeakResidualReport::max_abs_wt() const {
  double m = 0.0;
  for (const auto& r : rows) {
    if (r.bump) m = std::max(m, std::abs(r.wt));
  }
  return m;
}

WeakResidualAccumulator::WeakResidualAccumulator(const Grid& grid, const Coefficients& coeffs,
                                                 double epsilon, double record_spacing,
                                                 std::vector<TestFunction> tests)
    : grid_(grid),
      coeffs_(coeffs),
      epsilon_(epsilon),
      h_(record_spacing),
      tests_(std::move(tests)),
      sums_(tests_.size()) {
  if (!(h_ > 0.0)) throw std::invalid_argument("weak residuals: record spacing must be positive");
  const auto n = static_cast<std::size_t>(grid_.n());
  psi_.assign(tests_.size(), std::vector<double>(n));
  psi_x_.assign(tests_.size(), std::vector<double>(n));
  psi_xx_.assign(tests_.size(), std::vector<double>(n));
  for (std::size_t j = 0; j < tests_.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      psi_[j][i] = tests_[j].psi(grid_.x()[i]);
      psi_x_[j][i] = tests_[j].psi_x(grid_.x()[i]);
      psi_xx_[j][i] = tests_[j].psi_xx(grid_.x()[i]);
    }
  }
}

void WeakResidualAccumulator::observe(const State& s) {
  grid_.check_size(s.v, "weak residuals: v");
  const auto n = static_cast<std::size_t>(grid_.n());
  const NodalCoefficients c = evaluate(coeffs_, s.theta);
  const std::vector<double> v_x = d1_centered(s.v, grid_);
  const std::vector<double> u_x = d1_centered(s.u, grid_);
  const std::vector<double> th_x = d1_centered(s.theta, grid_);
  const std::vector<double> v_xx = laplacian_dirichlet(s.v, grid_);
  const std::vector<double> diss = dissipation_density(c.gamma, s.v, grid_);
  const std::vector<double> strain = d1_adjoint(s.v, grid_);
  std::vector<double> flux(n), heat(n);
  for (std::size_t i = 0; i < n; ++i) {
    flux[i] = c.gamma[i] * v_x[i] + coeffs_.a * u_x[i] - c.f[i];
    heat[i] = diss[i] - c.f[i] * strain[i];
  }
  // Spatial integrals are shared by test functions with the same profile, but the battery
  // is small enough that recomputing them keeps the bookkeeping simple.
  for (std::size_t j = 0; j < tests_.size(); ++j) {
    const TestFunction& tf = tests_[j];
    const double chi = tf.chi(s.t);
    const double chi_t = tf.chi_t(s.t);
    const double v_psi = product_integral(s.v, psi_[j], grid_);
    const double th_psi = product_integral(s.theta, psi_[j], grid_);
    Sums& sm = sums_[j];
    const double mom = -v_psi * chi_t + product_integral(flux, psi_x_[j], grid_) * chi;
    const double reg = epsilon_ * product_integral(v_xx, psi_xx_[j], grid_) * chi;
    const double temp = -th_psi * chi_t + product_integral(th_x, psi_x_[j], grid_) * chi -
                        product_integral(heat, psi_[j], grid_) * chi;
    if (count_ == 0) {
      sm.initial_v_psi = v_psi;
      sm.initial_th_psi = th_psi;
      sm.first = {mom, reg, temp};
    }
    sm.last = {mom, reg, temp};
    sm.total[0] += mom;
    sm.total[1] += reg;
    sm.total[2] += temp;
  }
  ++count_;
}

WeakResidualReport WeakResidualAccumulator::report() const {
  if (count_ < 2) throw std::invalid_argument("weak residuals: need at least two records");
  WeakResidualReport rep;
  for (std::size_t j = 0; j < tests_.size(); ++j) {
    const TestFunction& tf = tests_[j];
    const Sums& sm = sums_[j];
    std::array<double, 3> integral{};
    for (std::size_t c = 0; c < 3; ++c) {
      integral[c] = h_ * (sm.total[c] - 0.5 * (sm.first[c] + sm.last[c]));
    }
    const double chi0 = tf.chi(0.0);
    WeakResidual row;
    row.id = tf.id;
    row.has_momentum = tf.momentum_admissible();
    row.bump = tf.profile == TestFunction::Profile::Bump;
    if (row.has_momentum) {
      row.wu_limit = integral[0] - chi0 * sm.initial_v_psi;
      row.wu = row.wu_limit + integral[1];
    }
    row.wt = integral[2] - chi0 * sm.initial_th_psi;
    rep.rows.push_back(row);
  }
  return rep;
}

WeakResidualReport weak_residuals(const Trajectory& traj, const Coefficients& coeffs,
                                  const std::vector<TestFunction>& tests) {
  require_states(traj, "weak_residuals");
  for (const auto& tf : tests) {
    if (!(tf.tau > 0.0) || tf.tau > traj.t_end() * (1.0 + 1e-12)) {
      throw std::invalid_argument("weak_residuals: test function '" + tf.id +
                                  "' has temporal support beyond the trajectory");
    }
  }
  WeakResidualAccumulator acc(traj.grid, coeffs, traj.epsilon, traj.record_spacing(), tests);
  for (const State& s : traj.states) acc.observe(s);
  return acc.report();
}

// ---------------------------------------------------------------------------

std::vector<double> theta_min_track(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const State& s : traj.states) {
    out.push_back(*std::min_element(s.theta.begin(), s.theta.end()));
  }
  return out;
}

}  // namespace viscotherm
