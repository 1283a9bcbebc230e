#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "viscotherm/grid.hpp"

namespace viscotherm {

/// Nodal fields (velocity, displacement, temperature) at one time level.
struct State {
  double t = 0.0;
  std::vector<double> v;
  std::vector<double> u;
  std::vector<double> theta;
};

struct InitialData {
  std::vector<double> u0;
  std::vector<double> u0t;
  std::vector<double> theta0;

  /// Sizes match, u0 and u0t vanish at both ends, theta0 >= 0.
  void validate(const Grid& grid) const;
  State to_state() const;
};

using InitialParams = std::map<std::string, double>;

/// Named initial profiles on `grid`:
///   sine-mode     u0 = A sin(k pi x/L), u0t = B sin(k pi x/L),
///                 theta0 = c + d cos(m pi x/L)           (A, B, k, c, d, m)
///   double-bump   two smooth bumps of opposite sign in u0 at L/4, 3L/4 (A, width),
///                 uniform theta0 = c
///   random-seeded u0, u0t random sine series with decaying amplitudes, theta0 a
///                 positive random cosine series (A, B, c, modes); `seed` fixes the draw
InitialData initial_preset(std::string_view name, const Grid& grid,
                           const InitialParams& params = {}, std::uint64_t seed = 0);

InitialData zero_initial_data(const Grid& grid);

/// Gaussian smoothing with standard deviation `width_nodes` nodes. The displacement-type
/// fields are extended oddly across the boundary (keeps the zero boundary values), the
/// temperature evenly (keeps the Neumann condition and nonnegativity).
InitialData smooth_initial_data(const InitialData& data, const Grid& grid, double width_nodes);

/// Recorded time levels of one run plus the running dissipation integrals.
struct Trajectory {
  Grid grid{1.0, 5};
  std::vector<State> states;
  double dt = 0.0;        // time step of the integrator
  int record_every = 1;   // states[k].t == k * record_every * dt
  double epsilon = 0.0;
  std::vector<double> cum_diss_vxx;  // eps * int_0^t int v_xx^2, per recorded state
  std::vector<double> cum_diss_uxx;  // eps * a * int_0^t int u_xx^2, per recorded state
  double clamped_mass = 0.0;         // mass added by theta_clip
  double min_theta = 0.0;            // over every step, recorded or not
  std::vector<std::string> warnings;

  double record_spacing() const { return dt * record_every; }
  double t_end() const { return states.empty() ? 0.0 : states.back().t; }
  std::size_t size() const { return states.size(); }
};

}  // namespace viscotherm
