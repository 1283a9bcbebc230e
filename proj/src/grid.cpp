#include "viscotherm/grid.hpp"

#include <stdexcept>
#include <string>

namespace viscotherm {

Grid::Grid(double length, int n_nodes) : n_(n_nodes), length_(length) {
  if (!(length > 0.0)) {
    throw std::invalid_argument("grid length must be positive, got " +
                                std::to_string(length));
  }
  if (n_nodes < 5) {
    throw std::invalid_argument("grid needs at least 5 nodes, got " +
                                std::to_string(n_nodes));
  }
  dx_ = length / static_cast<double>(n_nodes - 1);
  x_.resize(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) x_[static_cast<std::size_t>(i)] = i * dx_;
  x_.back() = length;
}

void Grid::check_size(std::span<const double> field, const char* what) const {
  if (field.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument(std::string(what) + ": field has " +
                                std::to_string(field.size()) + " values, grid has " +
                                std::to_string(n_) + " nodes");
  }
}

Grid make_grid(double length, int n_nodes) { return Grid(length, n_nodes); }

double trapezoid(std::span<const double> field, const Grid& grid) {
  grid.check_size(field, "trapezoid");
  return trapezoid_uniform(field, grid.dx());
}

double trapezoid_uniform(std::span<const double> samples, double spacing) {
  const std::size_t n = samples.size();
  if (n == 0) return 0.0;
  if (n == 1) return 0.0;
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) interior += samples[i];
  return spacing * (0.5 * (samples.front() + samples.back()) + interior);
}

}  // namespace viscotherm
