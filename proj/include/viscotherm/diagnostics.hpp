#pragma once

#include <array>
#include <string>
#include <vector>

#include "viscotherm/coefficients.hpp"
#include "viscotherm/state.hpp"

namespace viscotherm {

// ---------------------------------------------------------------------------
// Energy

/// Per recorded time: kinetic 1/2 int v^2, elastic a/2 int u_x^2 (half-cell differences,
/// the form the scheme conserves), thermal int theta, their total, the two cumulative
/// regularisation dissipations, and |total + dissipation - total(0)|.
struct EnergyReport {
  std::vector<double> t;
  std::vector<double> kinetic;
  std::vector<double> elastic;
  std::vector<double> thermal;
  std::vector<double> total;
  std::vector<double> cum_diss_vxx;
  std::vector<double> cum_diss_uxx;
  std::vector<double> balance_residual;

  double initial_total() const { return total.empty() ? 0.0 : total.front(); }
  double max_balance_residual() const;
  double final_balance_residual() const {
    return balance_residual.empty() ? 0.0 : balance_residual.back();
  }
};

EnergyReport energy_ledger(const Trajectory& traj, const Coefficients& coeffs);

/// Largest value, over recorded times, of each a priori bounded quantity divided by E(0):
/// {kinetic, elastic, thermal, cum_diss_vxx, cum_diss_uxx}. Zero when E(0) == 0.
std::vector<double> a_priori_ratios(const EnergyReport& report);

/// Residual of the mechanical testing identity
///   d/dt [1/2 int v^2 + a/2 int u_x^2] + int gamma v_x^2 + eps int v_xx^2
///     + eps a int u_xx^2 - int f v_x
/// with a forward difference in time between consecutive records. The coefficients are
/// taken at the earlier record and the fields at the later one, as in the stepper.
struct IdentityResidual {
  std::vector<double> t;         // right end of each interval
  std::vector<double> residual;  // signed
  double max_abs = 0.0;
};

IdentityResidual testing_identity_residual(const Trajectory& traj, const Coefficients& coeffs);

// ---------------------------------------------------------------------------
// Estimate integrals

/// Space-time integrals over [0, T]:
///   I5 = int int (theta+1)^(p-2) theta_x^2,   I6 = int int (theta+1)^q,
///   I7 = int int |theta_x|^r,                 I8 = int int v_x^2.
struct EstimateReport {
  double p = 0.5, q = 2.0, r = 1.2;
  double i5 = 0.0, i6 = 0.0, i7 = 0.0, i8 = 0.0;
  std::vector<double> t;
  std::vector<double> mass;   // int theta
  std::vector<double> l2_v;   // int v^2
  std::vector<double> l2_ux;  // int u_x^2
  std::vector<std::string> warnings;
};

/// Exponent ranges with bounds independent of eps: p in (0,1), q in (0,3), r in [1, 3/2).
/// Values outside are evaluated anyway and reported in `warnings`.
EstimateReport estimate_integrals(const Trajectory& traj, double p, double q, double r);

// ---------------------------------------------------------------------------
// Localized energy inequality

/// Nonincreasing C^2 cutoff: 1 on [0, T0], quintic smoothstep down to 0 on [T0, T1].
class CutoffZeta {
 public:
  CutoffZeta(double plateau_end, double support_end);
  double operator()(double t) const;
  double derivative(double t) const;
  double plateau_end() const { return t0_; }
  double support_end() const { return t1_; }

 private:
  double t0_, t1_;
};

/// LHS - RHS of the temporally localized energy inequality:
///   int int zeta gamma v_x^2 - a/2 int int zeta' u_x^2 - 1/2 int u0t^2 - a/2 int u0x^2
///     - 1/2 int int zeta' v^2 - int int zeta f v_x.
/// The trajectory must reach the support end of zeta.
double localized_energy_slack(const Trajectory& traj, const Coefficients& coeffs,
                              const CutoffZeta& zeta);

/// int zeta(t) eps [int v_xx^2 + a int u_xx^2] dt, the amount by which the regularised
/// problem falls short of equality in the localized energy balance.
double localized_regularization_loss(const Trajectory& traj, const Coefficients& coeffs,
                                     const CutoffZeta& zeta);

// ---------------------------------------------------------------------------
// Weak residuals

/// phi(x, t) = psi(x) chi(t) with
///   psi(x) = max(0, 1 - ((2x - L)/(rho L))^2)^3   (bump), or psi = 1 (constant)
///   chi(t) = max(0, 1 - (t/tau)^2)^3.
struct TestFunction {
  enum class Profile { Bump, Constant };

  Profile profile = Profile::Bump;
  double rho = 0.5;
  double tau = 0.5;
  double length = 1.0;
  double weight = 1.0;  // overall scale, for linearity checks
  std::string id;

  /// Momentum identity requires psi to vanish on the boundary with compact support inside.
  bool momentum_admissible() const { return profile == Profile::Bump && rho < 1.0; }

  double psi(double x) const;
  double psi_x(double x) const;
  double psi_xx(double x) const;
  double chi(double t) const;
  double chi_t(double t) const;
};

/// The documented battery: bumps rho in {0.5, 0.8, 1.0} x tau in {0.25, 0.5, 0.9} t_end
/// (nine members), followed by three constant-profile members for the same tau values.
std::vector<TestFunction> standard_battery(double length, double t_end);

struct WeakResidual {
  std::string id;
  bool has_momentum = false;
  bool bump = false;
  /// Momentum identity for the regularised problem (includes eps int int v_xx phi_xx).
  double wu = 0.0;
  /// Same identity without the eps term, i.e. the form of the limit problem.
  double wu_limit = 0.0;
  /// Temperature identity (identical for the regularised and the limit problem).
  double wt = 0.0;
};

struct WeakResidualReport {
  std::vector<WeakResidual> rows;

  /// Max |wu| over momentum-admissible members.
  double max_abs_wu() const;
  /// Max |wt| over bump members (the nine-member battery).
  double max_abs_wt() const;
};

/// Streaming form of weak_residuals: feed every recorded state in order, then report().
/// Time integrals use the trapezoid rule on the given record spacing.
class WeakResidualAccumulator {
 public:
  WeakResidualAccumulator(const Grid& grid, const Coefficients& coeffs, double epsilon,
                          double record_spacing, std::vector<TestFunction> tests);
  void observe(const State& s);
  WeakResidualReport report() const;
  std::size_t records() const { return count_; }

 private:
  struct Sums {
    std::array<double, 3> total{}, first{}, last{};  // momentum, eps term, temperature
    double initial_v_psi = 0.0;
    double initial_th_psi = 0.0;
  };
  Grid grid_;
  Coefficients coeffs_;
  double epsilon_;
  double h_;
  std::vector<TestFunction> tests_;
  std::vector<std::vector<double>> psi_, psi_x_, psi_xx_;
  std::vector<Sums> sums_;
  std::size_t count_ = 0;
};

/// u_t is realised as v. Throws if some test function is supported beyond t_end.
WeakResidualReport weak_residuals(const Trajectory& traj, const Coefficients& coeffs,
                                  const std::vector<TestFunction>& tests);

// ---------------------------------------------------------------------------

/// Node-wise minimum of theta at each recorded time.
std::vector<double> theta_min_track(const Trajectory& traj);

}  // namespace viscotherm
