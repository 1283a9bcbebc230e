#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "viscotherm/banded.hpp"

namespace viscotherm {

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(int row, const std::string& what)
      : std::runtime_error(what), row_(row) {}
  int row() const { return row_; }

 private:
  int row_;
};

struct BandedSystem {
  BandedSystem(BandedOperator op, std::vector<double> rhs);

  BandedOperator op;
  std::vector<double> rhs;
  bool diagonally_dominant = false;
};

/// LU factorisation of a band matrix without pivoting. Every production system has the
/// form identity plus a positive semidefinite operator, so no pivoting is needed; a
/// tiny pivot or a failed residual check raises SingularSystemError.
class BandedLU {
 public:
  explicit BandedLU(const BandedOperator& op);

  std::vector<double> solve(std::span<const double> rhs) const;
  int n() const { return original_.n(); }

 private:
  BandedOperator original_;
  BandedOperator factors_;  // unit-lower multipliers below the diagonal, U on and above
  double norm_ = 0.0;
};

/// ||A x - b||_inf <= 1e-10 (||A||_inf ||x||_inf + ||b||_inf).
bool residual_ok(const BandedOperator& op, std::span<const double> x,
                 std::span<const double> b, double* residual = nullptr);

std::vector<double> solve_tridiagonal(const BandedSystem& system);
std::vector<double> solve_pentadiagonal(const BandedSystem& system);

}  // namespace viscotherm
