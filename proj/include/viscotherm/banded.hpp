#pragma once

#include <span>
#include <vector>

namespace viscotherm {

/// Square band matrix with `bandwidth` sub- and super-diagonals, stored row-wise.
class BandedOperator {
 public:
  BandedOperator() = default;
  BandedOperator(int n, int bandwidth);

  static BandedOperator identity(int n, int bandwidth = 1);

  int n() const { return n_; }
  int bandwidth() const { return bw_; }

  /// Entry (row, col); zero outside the band.
  double at(int row, int col) const;
  /// Mutable entry; |row - col| must not exceed the bandwidth.
  double& ref(int row, int col);

  /// Diagonal `offset` (0 main, >0 super, <0 sub), length n - |offset|.
  std::vector<double> band(int offset) const;

  std::vector<double> apply(std::span<const double> x) const;

  /// this * other; the bandwidths add.
  BandedOperator compose(const BandedOperator& other) const;
  /// alpha * this + beta * other; the result has the larger bandwidth.
  BandedOperator combine(double alpha, const BandedOperator& other, double beta) const;
  BandedOperator scaled(double alpha) const;

  /// Zeroes row `row` and puts `diag` on its diagonal.
  void set_identity_row(int row, double diag = 1.0);

  /// max_i sum_j |a_ij|
  double norm_inf() const;
  /// |a_ii| >= sum_{j != i} |a_ij| for every row.
  bool diagonally_dominant() const;
  bool is_symmetric(double tol) const;

 private:
  int width() const { return 2 * bw_ + 1; }
  int n_ = 0;
  int bw_ = 0;
  std::vector<double> data_;
};

}  // namespace viscotherm
