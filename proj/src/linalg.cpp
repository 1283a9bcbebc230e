#include "viscotherm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace viscotherm {

namespace {
constexpr double kResidualTol = 1e-10;
constexpr double kPivotTol = 1e-14;
}  // namespace

BandedSystem::BandedSystem(BandedOperator op_in, std::vector<double> rhs_in)
    : op(std::move(op_in)), rhs(std::move(rhs_in)) {
  if (rhs.size() != static_cast<std::size_t>(op.n())) {
    throw std::invalid_argument("BandedSystem: rhs length does not match operator dimension");
  }
  diagonally_dominant = op.diagonally_dominant();
}

BandedLU::BandedLU(const BandedOperator& op) : original_(op), factors_(op), norm_(op.norm_inf()) {
  const int n = op.n();
  const int bw = op.bandwidth();
  const double pivot_floor = kPivotTol * std::max(norm_, 1e-300);
  for (int k = 0; k < n; ++k) {
    const double pivot = factors_.at(k, k);
    if (!(std::abs(pivot) > pivot_floor)) {
      std::ostringstream msg;
      msg << "singular banded system: zero pivot in row " << k << " (pivot " << pivot << ")";
      throw SingularSystemError(k, msg.str());
    }
    for (int i = k + 1; i <= std::min(n - 1, k + bw); ++i) {
      const double m = factors_.at(i, k) / pivot;
      factors_.ref(i, k) = m;
      if (m == 0.0) continue;
      for (int j = k + 1; j <= std::min(n - 1, k + bw); ++j) {
        factors_.ref(i, j) -= m * factors_.at(k, j);
      }
    }
  }
}

std::vector<double> BandedLU::solve(std::span<const double> rhs) const {
  const int n = original_.n();
  const int bw = original_.bandwidth();
  if (rhs.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("BandedLU::solve: rhs length mismatch");
  }
  std::vector<double> x(rhs.begin(), rhs.end());
  for (int i = 0; i < n; ++i) {
    double acc = x[static_cast<std::size_t>(i)];
    for (int j = std::max(0, i - bw); j < i; ++j) acc -= factors_.at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = acc;
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[static_cast<std::size_t>(i)];
    for (int j = i + 1; j <= std::min(n - 1, i + bw); ++j) acc -= factors_.at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = acc / factors_.at(i, i);
  }
  double residual = 0.0;
  if (!residual_ok(original_, x, rhs, &residual)) {
    std::ostringstream msg;
    msg << "banded solve failed residual check (||Ax-b||_inf = " << residual << ")";
    throw SingularSystemError(-1, msg.str());
  }
  return x;
}

bool residual_ok(const BandedOperator& op, std::span<const double> x, std::span<const double> b,
                 double* residual) {
  const std::vector<double> ax = op.apply(x);
  double r = 0.0, xn = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    r = std::max(r, std::abs(ax[i] - b[i]));
    xn = std::max(xn, std::abs(x[i]));
    bn = std::max(bn, std::abs(b[i]));
  }
  if (residual) *residual = r;
  // The absolute floor covers fields that have decayed into the subnormal range.
  return std::isfinite(r) &&
         r <= kResidualTol * (op.norm_inf() * xn + bn) + std::numeric_limits<double>::min();
}

std::vector<double> solve_tridiagonal(const BandedSystem& system) {
  if (system.op.bandwidth() != 1) {
    throw std::invalid_argument("solve_tridiagonal: operator bandwidth must be 1");
  }
  return BandedLU(system.op).solve(system.rhs);
}

std::vector<double> solve_pentadiagonal(const BandedSystem& system) {
  if (system.op.bandwidth() > 2) {
    throw std::invalid_argument("solve_pentadiagonal: operator bandwidth must be <= 2");
  }
  return BandedLU(system.op).solve(system.rhs);
}

}  // namespace viscotherm
