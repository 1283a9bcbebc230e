#include "viscotherm/coefficients.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace viscotherm {

namespace {

const std::set<std::string>& known_params() {
  static const std::set<std::string> keys = {"a", "gamma0", "k_gamma", "K_gamma",
                                             "K_f", "alpha", "b"};
  return keys;
}

double param(const PresetParams& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void validate_params(const PresetParams& p) {
  for (const auto& [key, value] : p) {
    if (!known_params().count(key)) {
      throw std::invalid_argument("unknown coefficient parameter '" + key + "'");
    }
    if (!std::isfinite(value)) {
      throw std::invalid_argument("coefficient parameter '" + key + "' is not finite");
    }
  }
  if (param(p, "a", 1.0) <= 0.0) throw std::invalid_argument("elastic modulus a must be > 0");
  if (p.count("k_gamma") && p.at("k_gamma") <= 0.0) {
    throw std::invalid_argument("viscosity lower bound k_gamma must be > 0");
  }
}

Coefficients constant_viscosity(const PresetParams& p) {
  const double g0 = param(p, "gamma0", 1.0);
  if (g0 <= 0.0) {
    throw std::invalid_argument("viscosity gamma0 must be > 0 (lower bound k_gamma > 0)");
  }
  Coefficients c;
  c.a = param(p, "a", 1.0);
  c.gamma = [g0](double) { return g0; };
  c.gamma_prime = [](double) { return 0.0; };
  c.k_gamma = g0;
  c.K_gamma = g0;
  c.constant_gamma = true;
  c.gamma_label = "const";
  return c;
}

}  // namespace

std::vector<double> bound_lattice() {
  std::vector<double> xi{0.0};
  constexpr int kLogPoints = 60;
  for (int j = 0; j < kLogPoints; ++j) {
    xi.push_back(std::pow(10.0, -3.0 + 6.0 * j / (kLogPoints - 1)));
  }
  return xi;
}

BoundCheck check_bounds(const Coefficients& c) {
  BoundCheck out;
  // Relative slack for values computed in floating point right at the bound.
  constexpr double kTol = 1e-12;
  for (double xi : bound_lattice()) {
    const double g = c.gamma(xi);
    if (!(g >= c.k_gamma * (1 - kTol) && g <= c.K_gamma * (1 + kTol))) {
      if (out.gamma_ok) {
        std::ostringstream msg;
        msg << "gamma(" << xi << ") = " << g << " outside [" << c.k_gamma << ", "
            << c.K_gamma << "]";
        out.messages.push_back(msg.str());
        out.worst_xi = xi;
      }
      out.gamma_ok = false;
    }
    const double fv = c.f(xi);
    const double bound = c.K_f * std::pow(xi + 1.0, c.alpha);
    if (!(std::abs(fv) <= bound * (1 + kTol))) {
      if (out.f_ok) {
        std::ostringstream msg;
        msg << "|f(" << xi << ")| = " << std::abs(fv) << " exceeds K_f (xi+1)^alpha = " << bound;
        out.messages.push_back(msg.str());
        out.worst_xi = xi;
      }
      out.f_ok = false;
    }
  }
  if (c.f(0.0) != 0.0) {
    out.f_zero_ok = false;
    out.messages.push_back("f(0) != 0");
  }
  if (!(c.k_gamma > 0.0)) {
    out.gamma_ok = false;
    out.messages.push_back("k_gamma must be > 0");
  }
  return out;
}

Coefficients coefficient_presets(std::string_view name, const PresetParams& p) {
  validate_params(p);
  if (name == "const") {
    return constant_viscosity(p);
  }
  if (name == "rational-visc") {
    const double k = param(p, "k_gamma", 1.0);
    const double K = param(p, "K_gamma", 2.0);
    if (k <= 0.0) throw std::invalid_argument("rational-visc: k_gamma must be > 0");
    if (K < k) throw std::invalid_argument("rational-visc: K_gamma must be >= k_gamma");
    Coefficients c;
    c.a = param(p, "a", 1.0);
    c.gamma = [k, K](double xi) { return k + (K - k) / (1.0 + xi); };
    c.gamma_prime = [k, K](double xi) { return -(K - k) / ((1.0 + xi) * (1.0 + xi)); };
    c.k_gamma = k;
    c.K_gamma = K;
    c.constant_gamma = (K == k);
    c.gamma_label = "rational-visc";
    return c;
  }
  if (name == "power-f") {
    Coefficients c = constant_viscosity(p);
    const double kf = param(p, "K_f", 1.0);
    const double alpha = param(p, "alpha", 1.0);
    if (kf <= 0.0) throw std::invalid_argument("power-f: K_f must be > 0");
    if (alpha < 0.0) throw std::invalid_argument("power-f: alpha must be >= 0");
    c.f = [kf, alpha](double xi) { return kf * (std::pow(xi + 1.0, alpha) - 1.0); };
    c.f_prime = [kf, alpha](double xi) { return kf * alpha * std::pow(xi + 1.0, alpha - 1.0); };
    c.K_f = kf;
    c.alpha = alpha;
    c.coupled = alpha > 0.0;
    c.f_label = "power-f";
    return c;
  }
  if (name == "linear-dilation") {
    Coefficients c = constant_viscosity(p);
    const double b = param(p, "b", 0.5);
    c.f = [b](double xi) { return b * xi; };
    c.f_prime = [b](double) { return b; };
    c.K_f = b != 0.0 ? std::abs(b) : 1.0;
    c.alpha = 1.0;
    c.coupled = b != 0.0;
    c.f_label = "linear-dilation";
    return c;
  }
  throw std::invalid_argument("unknown coefficient preset '" + std::string(name) +
                              "' (expected const, rational-visc, power-f, linear-dilation)");
}

Coefficients combine(const Coefficients& viscous, const Coefficients& dilation) {
  Coefficients c = viscous;
  c.f = dilation.f;
  c.f_prime = dilation.f_prime;
  c.K_f = dilation.K_f;
  c.alpha = dilation.alpha;
  c.coupled = dilation.coupled;
  c.f_label = dilation.f_label;
  return c;
}

Coefficients coefficient_presets(const std::vector<std::string>& names,
                                 const PresetParams& params) {
  if (names.empty()) throw std::invalid_argument("no coefficient preset given");
  Coefficients out = coefficient_presets(names.front(), params);
  for (std::size_t i = 1; i < names.size(); ++i) {
    Coefficients next = coefficient_presets(names[i], params);
    if (next.gamma_label != "const") {
      Coefficients merged = next;
      merged.f = out.f;
      merged.f_prime = out.f_prime;
      merged.K_f = out.K_f;
      merged.alpha = out.alpha;
      merged.coupled = out.coupled;
      merged.f_label = out.f_label;
      out = merged;
    }
    if (next.f_label != "none") out = combine(out, next);
  }
  return out;
}

}  // namespace viscotherm
