#pragma once

#include <functional>
#include <vector>

#include "viscotherm/coefficients.hpp"
#include "viscotherm/diagnostics.hpp"
#include "viscotherm/state.hpp"
#include "viscotherm/stepper.hpp"

namespace viscotherm {

/// Distances between two runs sampled on the same space-time lattice.
struct TrajectoryDistances {
  double d_v = 0.0;      // L^2(Omega x (0,T))
  double d_u = 0.0;      // sup over the lattice
  double d_theta = 0.0;  // L^q(Omega x (0,T))
  double d_flux = 0.0;   // L^2 distance of sqrt(gamma(theta)) v_x
};

/// Both trajectories must share grid, record spacing and length.
TrajectoryDistances trajectory_distances(const Trajectory& a, const Trajectory& b,
                                         const Coefficients& coeffs, double q = 2.0);

struct SweepResult {
  std::vector<double> epsilons;
  double q = 2.0;
  /// Entry j compares epsilons[j] with epsilons[j+1].
  std::vector<double> d_v, d_u, d_theta, d_flux;
  /// log(d_j / d_{j+1}) / log(eps_j / eps_{j+1}); informational only.
  std::vector<double> order_v;
  /// Every distance sequence is nonincreasing.
  bool cauchy = false;
  /// Every distance sequence is strictly decreasing.
  bool strictly_decreasing = false;
  std::vector<std::string> warnings;
};

/// Runs the stepper once per epsilon (cfg.epsilon is overridden) and compares consecutive
/// runs. Needs at least three values, nonincreasing. Only two trajectories are held at once.
SweepResult epsilon_sweep(const InitialData& initial, const Coefficients& coeffs,
                          const Grid& grid, const StepConfig& cfg,
                          const std::vector<double>& epsilons, double q = 2.0);

// ---------------------------------------------------------------------------

/// Smooth separable solution satisfying every boundary condition of the regularised system:
///   v* = A_v cos(w t) sin(k x),  u* = A_u (1 + sin(w t)) sin(k x),  k = pi/L,
///   theta* = c0 + c1 cos(w t) cos(k x).
/// The matching source terms for given coefficients and eps are returned by forcing().
struct ManufacturedSolution {
  double length = 1.0;
  double amp_v = 0.5;
  double amp_u = 0.25;
  double theta_mean = 1.0;
  double theta_amp = 0.4;
  double omega = 2.0;

  double v(double x, double t) const;
  double u(double x, double t) const;
  double theta(double x, double t) const;
  InitialData initial(const Grid& grid) const;
  Forcing forcing(const Grid& grid, const Coefficients& coeffs, double epsilon) const;

  /// Identically zero solution (forcing vanishes as well).
  static ManufacturedSolution zero(double length);
};

struct RefinementLevel {
  int n_nodes = 0;
  double dx = 0.0;
  double dt = 0.0;
  double err_v = 0.0;  // max-norm errors at the final time
  double err_u = 0.0;
  double err_theta = 0.0;
  double err_max = 0.0;
};

struct RefinementTable {
  std::vector<RefinementLevel> levels;
  /// log2(err_l / err_{l+1}) of err_max: the order in dx.
  std::vector<double> spatial_order;
  /// spatial_order divided by log2 of the dt ratio: the order in dt.
  std::vector<double> temporal_order;
};

struct RefinementConfig {
  int levels = 3;
  int n0 = 21;          // nodes on the coarsest level; intervals double per level
  double dt0 = 2e-3;    // step on the coarsest level
  double dt_ratio = 4;  // dt_l / dt_{l+1}; 4 keeps dt proportional to dx^2
  double t_end = 0.5;
  double epsilon = 1e-2;
};

RefinementTable refinement_study(const ManufacturedSolution& mms, const Coefficients& coeffs,
                                 const RefinementConfig& cfg);

/// Weak-form residuals of runs under simultaneous halving of dx and dt.
struct WeakRefinementLevel {
  int n_nodes = 0;
  double dt = 0.0;
  double max_wu = 0.0;  // over momentum-admissible test functions
  double max_wt = 0.0;  // over the bump battery
  WeakResidualReport report;
};

struct WeakRefinementTable {
  std::vector<WeakRefinementLevel> levels;
  std::vector<double> order_wu, order_wt;  // log2 ratios between consecutive levels
};

/// Level l uses (n0 - 1) 2^l intervals and dt = base.dt / 2^l; the initial data are
/// rebuilt on each grid by `initial`. States are streamed, never stored.
WeakRefinementTable weak_residual_study(const std::function<InitialData(const Grid&)>& initial,
                                        const Coefficients& coeffs, double length, int n0,
                                        const StepConfig& base, int levels = 3);

// ---------------------------------------------------------------------------

/// Complex exponent lambda = -decay_rate +/- i angular_frequency of one sine mode.
struct ModeFit {
  double decay_rate = 0.0;
  double angular_frequency = 0.0;
  bool oscillatory = false;
};

/// Projects u onto sin(mode pi x/L) at every `stride`-th record and fits the exact
/// two-term linear recurrence a_{k+2} = c1 a_{k+1} + c0 a_k by least squares (Prony).
ModeFit fit_mode(const Trajectory& traj, int mode = 1, int stride = 0);

struct DecayRateLevel {
  double dt = 0.0;
  ModeFit fit;
  double rate_error = 0.0;       // |fitted decay - reference decay|
  double frequency_error = 0.0;  // |fitted frequency - reference frequency|
};

/// Constant-coefficient single-mode runs at each dt, compared with the given reference
/// exponent (usually the roots of the semi-discrete mode equation).
std::vector<DecayRateLevel> decay_rate_study(const Coefficients& coeffs, const Grid& grid,
                                             const StepConfig& base,
                                             const std::vector<double>& dts,
                                             double reference_decay, double reference_frequency);

}  // namespace viscotherm
