#pragma once

#include <span>
#include <vector>

namespace viscotherm {

/// Uniform mesh over (0, L) with nodes x_i = i*dx, i = 0..n-1.
class Grid {
 public:
  Grid(double length, int n_nodes);

  int n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return dx_; }
  const std::vector<double>& x() const { return x_; }
  double x(int i) const { return x_[static_cast<std::size_t>(i)]; }

  /// Throws std::invalid_argument when `field` does not have one value per node.
  void check_size(std::span<const double> field, const char* what) const;

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  int n_;
  double length_;
  double dx_;
  std::vector<double> x_;
};

/// Rejects L <= 0 and n_nodes < 5 (the biharmonic stencil needs five points).
Grid make_grid(double length, int n_nodes);

/// dx * (f_0/2 + f_1 + ... + f_{n-2} + f_{n-1}/2).
double trapezoid(std::span<const double> field, const Grid& grid);

/// Trapezoid rule on a uniformly spaced sequence of samples.
double trapezoid_uniform(std::span<const double> samples, double spacing);

}  // namespace viscotherm
