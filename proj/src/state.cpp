#include "viscotherm/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace viscotherm {

namespace {

double param(const InitialParams& p, const char* key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void require_keys(const InitialParams& p, std::string_view preset,
                  const std::set<std::string>& allowed) {
  for (const auto& entry : p) {
    if (!allowed.count(entry.first)) {
      throw std::invalid_argument("initial preset '" + std::string(preset) +
                                  "': unknown parameter '" + entry.first + "'");
    }
  }
}

// Reflects an index into [0, n) with odd (sign = -1) or even (+1) extension.
double extended(const std::vector<double>& f, long i, double sign) {
  const long n = static_cast<long>(f.size());
  double s = 1.0;
  // Reflection about the end nodes: f_{-i} = sign f_i, f_{n-1+i} = sign f_{n-1-i}.
  while (i < 0 || i >= n) {
    if (i < 0) {
      i = -i;
    } else {
      i = 2 * (n - 1) - i;
    }
    s *= sign;
  }
  return s * f[static_cast<std::size_t>(i)];
}

std::vector<double> gaussian_smooth(const std::vector<double>& f, double width, double sign) {
  const long radius = static_cast<long>(std::ceil(3.0 * width));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (long k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * (k / width) * (k / width));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;
  std::vector<double> out(f.size(), 0.0);
  for (long i = 0; i < static_cast<long>(f.size()); ++i) {
    double acc = 0.0;
    for (long k = -radius; k <= radius; ++k) {
      acc += kernel[static_cast<std::size_t>(k + radius)] * extended(f, i + k, sign);
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

}  // namespace

void InitialData::validate(const Grid& grid) const {
  grid.check_size(u0, "initial u0");
  grid.check_size(u0t, "initial u0t");
  grid.check_size(theta0, "initial theta0");
  constexpr double kBoundaryTol = 1e-12;
  if (std::abs(u0.front()) > kBoundaryTol || std::abs(u0.back()) > kBoundaryTol) {
    throw std::invalid_argument("initial u0 must vanish at both boundary nodes");
  }
  if (std::abs(u0t.front()) > kBoundaryTol || std::abs(u0t.back()) > kBoundaryTol) {
    throw std::invalid_argument("initial u0t must vanish at both boundary nodes");
  }
  for (std::size_t i = 0; i < theta0.size(); ++i) {
    if (!(theta0[i] >= 0.0)) {
      throw std::invalid_argument("initial theta0 must be >= 0 (node " + std::to_string(i) + ")");
    }
  }
  for (const auto* field : {&u0, &u0t, &theta0}) {
    for (double value : *field) {
      if (!std::isfinite(value)) throw std::invalid_argument("initial data is not finite");
    }
  }
}

State InitialData::to_state() const {
  State s;
  s.t = 0.0;
  s.v = u0t;
  s.u = u0;
  s.theta = theta0;
  // Boundary values exactly zero so the scheme's fixed points are exact.
  s.v.front() = s.v.back() = 0.0;
  s.u.front() = s.u.back() = 0.0;
  return s;
}

InitialData zero_initial_data(const Grid& grid) {
  const auto n = static_cast<std::size_t>(grid.n());
  return InitialData{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                     std::vector<double>(n, 0.0)};
}

InitialData initial_preset(std::string_view name, const Grid& grid,
                           const InitialParams& p, std::uint64_t seed) {
  using std::numbers::pi;
  const auto n = static_cast<std::size_t>(grid.n());
  const double L = grid.length();
  InitialData d = zero_initial_data(grid);

  if (name == "sine-mode") {
    require_keys(p, name, {"A", "B", "k", "c", "d", "m"});
    const double A = param(p, "A", 1.0);
    const double B = param(p, "B", 0.0);
    const double k = param(p, "k", 1.0);
    const double c = param(p, "c", 0.5);
    const double dd = param(p, "d", 0.25);
    const double m = param(p, "m", 2.0);
    if (k != std::round(k) || m != std::round(m)) {
      throw std::invalid_argument("sine-mode: mode numbers k, m must be integers");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double s = std::sin(k * pi * grid.x()[i] / L);
      d.u0[i] = A * s;
      d.u0t[i] = B * s;
      d.theta0[i] = c + dd * std::cos(m * pi * grid.x()[i] / L);
    }
  } else if (name == "double-bump") {
    require_keys(p, name, {"A", "width", "c"});
    const double A = param(p, "A", 1.0);
    const double w = param(p, "width", 0.2) * L;
    const double c = param(p, "c", 0.5);
    auto bump = [w](double x, double centre) {
      const double s = (x - centre) / w;
      return std::abs(s) < 1.0 ? std::pow(1.0 - s * s, 3) : 0.0;
    };
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid.x()[i];
      d.u0[i] = A * (bump(x, 0.25 * L) - bump(x, 0.75 * L));
      d.theta0[i] = c;
    }
  } else if (name == "random-seeded") {
    require_keys(p, name, {"A", "B", "c", "modes"});
    const double A = param(p, "A", 1.0);
    const double B = param(p, "B", 0.5);
    const double c = param(p, "c", 1.0);
    const int modes = static_cast<int>(param(p, "modes", 6));
    if (modes < 1) throw std::invalid_argument("random-seeded: modes must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int k = 1; k <= modes; ++k) {
      const double au = A * unit(rng) / (k * k);
      const double av = B * unit(rng) / (k * k);
      const double at = 0.5 * c * unit(rng) / (k * k);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x()[i];
        d.u0[i] += au * std::sin(k * pi * x / L);
        d.u0t[i] += av * std::sin(k * pi * x / L);
        d.theta0[i] += at * std::cos(k * pi * x / L);
      }
    }
    // Shift so theta0 is nonnegative with the requested mean.
    const double lo = *std::min_element(d.theta0.begin(), d.theta0.end());
    for (double& th : d.theta0) th += c + std::max(0.0, -lo - c);
  } else {
    throw std::invalid_argument("unknown initial-data preset '" + std::string(name) +
                                "' (expected sine-mode, double-bump, random-seeded)");
  }
  d.u0.front() = d.u0.back() = 0.0;
  d.u0t.front() = d.u0t.back() = 0.0;
  return d;
}

InitialData smooth_initial_data(const InitialData& data, const Grid& grid, double width_nodes) {
  data.validate(grid);
  if (!(width_nodes > 0.0)) throw std::invalid_argument("smoothing width must be > 0");
  InitialData out;
  out.u0 = gaussian_smooth(data.u0, width_nodes, -1.0);
  out.u0t = gaussian_smooth(data.u0t, width_nodes, -1.0);
  out.theta0 = gaussian_smooth(data.theta0, width_nodes, 1.0);
  out.u0.front() = out.u0.back() = 0.0;
  out.u0t.front() = out.u0t.back() = 0.0;
  for (double& th : out.theta0) th = std::max(th, 0.0);
  return out;
}

}  // namespace viscotherm
