#include "viscotherm/operators.hpp"

#include <stdexcept>
#include <string>

namespace viscotherm {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void check_coefficients(std::span<const double> c, const Grid& grid) {
  grid.check_size(c, "flux_divergence coefficients");
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > 0.0)) {
      throw std::invalid_argument("flux_divergence: coefficient at node " + std::to_string(i) +
                                  " is not positive (" + std::to_string(c[i]) + ")");
    }
  }
}

}  // namespace

std::vector<double> d1_centered(std::span<const double> f, const Grid& grid) {
  grid.check_size(f, "d1_centered");
  const int n = grid.n();
  const double h = grid.dx();
  std::vector<double> out(idx(n));
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (int i = 1; i < n - 1; ++i) out[idx(i)] = (f[idx(i + 1)] - f[idx(i - 1)]) / (2.0 * h);
  out[idx(n - 1)] = (3.0 * f[idx(n - 1)] - 4.0 * f[idx(n - 2)] + f[idx(n - 3)]) / (2.0 * h);
  return out;
}

std::vector<double> d1_adjoint(std::span<const double> f, const Grid& grid) {
  grid.check_size(f, "d1_adjoint");
  const int n = grid.n();
  const double h = grid.dx();
  std::vector<double> out(idx(n));
  out[0] = (f[1] - f[0]) / h;
  for (int i = 1; i < n - 1; ++i) out[idx(i)] = (f[idx(i + 1)] - f[idx(i - 1)]) / (2.0 * h);
  out[idx(n - 1)] = (f[idx(n - 1)] - f[idx(n - 2)]) / h;
  return out;
}

std::vector<double> flux_divergence(std::span<const double> c, std::span<const double> f,
                                    const Grid& grid) {
  check_coefficients(c, grid);
  grid.check_size(f, "flux_divergence");
  const int n = grid.n();
  const double h2 = grid.dx() * grid.dx();
  std::vector<double> out(idx(n), 0.0);
  for (int i = 1; i < n - 1; ++i) {
    const double c_minus = 0.5 * (c[idx(i - 1)] + c[idx(i)]);
    const double c_plus = 0.5 * (c[idx(i)] + c[idx(i + 1)]);
    out[idx(i)] = (c_plus * (f[idx(i + 1)] - f[idx(i)]) - c_minus * (f[idx(i)] - f[idx(i - 1)])) / h2;
  }
  return out;
}

BandedOperator flux_divergence_operator(std::span<const double> c, const Grid& grid) {
  check_coefficients(c, grid);
  const int n = grid.n();
  const double h2 = grid.dx() * grid.dx();
  BandedOperator op(n, 1);
  for (int i = 1; i < n - 1; ++i) {
    const double c_minus = 0.5 * (c[idx(i - 1)] + c[idx(i)]);
    const double c_plus = 0.5 * (c[idx(i)] + c[idx(i + 1)]);
    op.ref(i, i - 1) = c_minus / h2;
    op.ref(i, i) = -(c_minus + c_plus) / h2;
    op.ref(i, i + 1) = c_plus / h2;
  }
  return op;
}

std::vector<double> laplacian_dirichlet(std::span<const double> f, const Grid& grid) {
  grid.check_size(f, "laplacian_dirichlet");
  const int n = grid.n();
  const double h2 = grid.dx() * grid.dx();
  std::vector<double> out(idx(n), 0.0);
  for (int i = 1; i < n - 1; ++i) {
    out[idx(i)] = (f[idx(i + 1)] - 2.0 * f[idx(i)] + f[idx(i - 1)]) / h2;
  }
  return out;
}

BandedOperator laplacian_dirichlet_operator(const Grid& grid) {
  const int n = grid.n();
  const double h2 = grid.dx() * grid.dx();
  BandedOperator op(n, 1);
  for (int i = 1; i < n - 1; ++i) {
    op.ref(i, i - 1) = 1.0 / h2;
    op.ref(i, i) = -2.0 / h2;
    op.ref(i, i + 1) = 1.0 / h2;
  }
  return op;
}

std::vector<double> laplacian_neumann(std::span<const double> f, const Grid& grid) {
  grid.check_size(f, "laplacian_neumann");
  const int n = grid.n();
  const double h2 = grid.dx() * grid.dx();
  std::vector<double> out(idx(n));
  out[0] = 2.0 * (f[1] - f[0]) / h2;
  for (int i = 1; i < n - 1; ++i) {
    out[idx(i)] = (f[idx(i + 1)] - 2.0 * f[idx(i)] + f[idx(i - 1)]) / h2;
  }
  out[idx(n - 1)] = 2.0 * (f[idx(n - 2)] - f[idx(n - 1)]) / h2;
  return out;
}

BandedOperator laplacian_neumann_operator(const Grid& grid) {
  const int n = grid.n();
  const double h2 = grid.dx() * grid.dx();
  BandedOperator op(n, 1);
  op.ref(0, 0) = -2.0 / h2;
  op.ref(0, 1) = 2.0 / h2;
  for (int i = 1; i < n - 1; ++i) {
    op.ref(i, i - 1) = 1.0 / h2;
    op.ref(i, i) = -2.0 / h2;
    op.ref(i, i + 1) = 1.0 / h2;
  }
  op.ref(n - 1, n - 2) = 2.0 / h2;
  op.ref(n - 1, n - 1) = -2.0 / h2;
  return op;
}

std::vector<double> biharmonic_navier(std::span<const double> f, const Grid& grid) {
  const std::vector<double> lap = laplacian_dirichlet(f, grid);
  return laplacian_dirichlet(lap, grid);
}

BandedOperator biharmonic_navier_operator(const Grid& grid) {
  const BandedOperator lap = laplacian_dirichlet_operator(grid);
  return lap.compose(lap);
}

std::vector<double> dissipation_density(std::span<const double> c, std::span<const double> f,
                                        const Grid& grid) {
  grid.check_size(c, "dissipation_density coefficients");
  grid.check_size(f, "dissipation_density");
  const int n = grid.n();
  const double h = grid.dx();
  std::vector<double> half(idx(n - 1));
  for (int i = 0; i < n - 1; ++i) {
    const double slope = (f[idx(i + 1)] - f[idx(i)]) / h;
    half[idx(i)] = 0.5 * (c[idx(i)] + c[idx(i + 1)]) * slope * slope;
  }
  std::vector<double> out(idx(n));
  out[0] = half[0];
  for (int i = 1; i < n - 1; ++i) out[idx(i)] = 0.5 * (half[idx(i - 1)] + half[idx(i)]);
  out[idx(n - 1)] = half[idx(n - 2)];
  return out;
}

double gradient_energy(std::span<const double> f, const Grid& grid) {
  grid.check_size(f, "gradient_energy");
  double acc = 0.0;
  for (int i = 0; i + 1 < grid.n(); ++i) {
    const double d = f[idx(i + 1)] - f[idx(i)];
    acc += d * d;
  }
  return acc / grid.dx();
}

}  // namespace viscotherm
