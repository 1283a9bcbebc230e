#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace viscotherm {

/// Material data of the model. gamma and f are only evaluated on [0, inf).
struct Coefficients {
  double a = 1.0;
  std::function<double(double)> gamma = [](double) { return 1.0; };
  std::function<double(double)> f = [](double) { return 0.0; };
  /// Derivatives, when known in closed form (used by manufactured-solution forcing).
  std::function<double(double)> gamma_prime = [](double) { return 0.0; };
  std::function<double(double)> f_prime = [](double) { return 0.0; };
  double k_gamma = 1.0;
  double K_gamma = 1.0;
  double K_f = 1.0;
  double alpha = 0.0;
  /// False when f is identically zero (mechanics and temperature decouple).
  bool coupled = false;
  /// True when gamma is constant; lets the stepper factor the velocity system once.
  bool constant_gamma = true;
  std::string gamma_label = "const";
  std::string f_label = "none";

  /// The existence theory needs alpha < 3/2; larger exponents are allowed but flagged.
  bool alpha_warning() const { return alpha >= 1.5; }
};

/// Outcome of the sampled hypothesis checks on the xi lattice.
struct BoundCheck {
  bool gamma_ok = true;  // k_gamma <= gamma(xi) <= K_gamma
  bool f_ok = true;      // |f(xi)| <= K_f (xi + 1)^alpha
  bool f_zero_ok = true; // f(0) == 0
  double worst_xi = 0.0;
  std::vector<std::string> messages;

  bool ok() const { return gamma_ok && f_ok && f_zero_ok; }
};

/// 0 followed by 60 log-spaced points from 1e-3 to 1e3.
std::vector<double> bound_lattice();

BoundCheck check_bounds(const Coefficients& c);

using PresetParams = std::map<std::string, double>;

/// Builds one of the named coefficient families:
///   const           gamma = gamma0, f = 0
///   rational-visc   gamma(xi) = k + (K - k)/(1 + xi), f = 0
///   power-f         gamma = gamma0, f(xi) = K_f ((xi + 1)^alpha - 1)
///   linear-dilation gamma = gamma0, f(xi) = b xi  (alpha = 1)
/// Recognised params: a, gamma0, k_gamma, K_gamma, K_f, alpha, b. Missing params take
/// documented defaults; an unknown key or a nonpositive viscosity bound throws.
Coefficients coefficient_presets(std::string_view name, const PresetParams& params = {});

/// Viscosity from `viscous`, dilation coupling from `dilation`, elastic modulus from `viscous`.
Coefficients combine(const Coefficients& viscous, const Coefficients& dilation);

/// Applies each preset in order: gamma comes from the last preset that defines a
/// non-trivial viscosity, f from the last that defines a coupling.
Coefficients coefficient_presets(const std::vector<std::string>& names,
                                 const PresetParams& params = {});

}  // namespace viscotherm
