#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "viscotherm/banded.hpp"
#include "viscotherm/coefficients.hpp"
#include "viscotherm/grid.hpp"
#include "viscotherm/linalg.hpp"
#include "viscotherm/state.hpp"

namespace viscotherm {

struct StepConfig {
  double dt = 1e-4;
  double epsilon = 1e-3;
  double t_end = 1.0;
  bool theta_clip = false;
  int record_every = 1;
  /// Number of coefficient evaluations per step; 1 keeps gamma, f lagged at t_n.
  int picard_iters = 1;

  /// Throws std::invalid_argument unless dt > 0, 0 < epsilon <= 1, t_end >= dt,
  /// record_every >= 1 and picard_iters >= 1.
  void validate() const;
  /// Number of time steps, round(t_end / dt).
  long steps() const;
};

/// Raised when a step produces NaN or Inf.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(long step, const std::string& what) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Extra sources added to the three equations at time t (a manufactured-solution hook).
/// The callback fills s_v, s_u, s_theta, each with one entry per node.
using Forcing = std::function<void(double t, std::span<double> s_v, std::span<double> s_u,
                                   std::span<double> s_theta)>;

/// One staggered IMEX step t_n -> t_n + dt:
///   (I + dt eps B + dt G_n) v' = v + dt (a L_D u - D1 f(theta~)),   G_n = -(gamma(theta~) .)_x
///   (I - dt eps L_D) u'       = u + dt v'
///   (I - dt L_N) theta'       = theta + dt (gamma(theta~) v'_x^2 - f(theta~) v'_x)
/// where theta~ = max(theta, 0) is the temperature the coefficients are evaluated at.
class Integrator {
 public:
  Integrator(Grid grid, Coefficients coeffs, StepConfig cfg, Forcing forcing = {});

  struct Increment {
    State state;
    double diss_vxx = 0.0;  // dt * eps * int (L_D v')^2
    double diss_uxx = 0.0;  // dt * eps * a * int (L_D u')^2
    double clamped_mass = 0.0;
  };

  /// `step_index` only labels error messages.
  Increment advance(const State& s, long step_index = 0) const;

  const Grid& grid() const { return grid_; }
  const Coefficients& coefficients() const { return coeffs_; }
  const StepConfig& config() const { return cfg_; }

 private:
  Increment advance_once(const State& s, std::span<const double> theta_coef) const;

  Grid grid_;
  Coefficients coeffs_;
  StepConfig cfg_;
  Forcing forcing_;
  BandedOperator lap_d_;
  BandedOperator biharmonic_;
  std::optional<BandedLU> v_solver_;  // only when gamma is constant
  BandedLU u_solver_;
  BandedLU theta_solver_;
};

State step(const State& state, const Coefficients& coeffs, const Grid& grid,
           const StepConfig& cfg);

/// Integrates from t = 0 to cfg.t_end, recording every cfg.record_every-th state
/// (the initial state included). round(t_end/dt) must be a multiple of record_every.
Trajectory run(const InitialData& initial, const Coefficients& coeffs, const Grid& grid,
               const StepConfig& cfg, const Forcing& forcing = {});

/// Called with every state run() would record, in order, the initial state included.
using StateObserver = std::function<void(const State&)>;

/// Same integration as run(), but recorded states go to `observer` instead of being stored.
/// The returned Trajectory keeps only the initial and final states with their accumulators,
/// so its record spacing is meaningless for time integrals.
Trajectory run_streaming(const InitialData& initial, const Coefficients& coeffs,
                         const Grid& grid, const StepConfig& cfg, const StateObserver& observer,
                         const Forcing& forcing = {});

}  // namespace viscotherm
