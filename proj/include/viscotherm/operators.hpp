#pragma once

#include <span>
#include <vector>

#include "viscotherm/banded.hpp"
#include "viscotherm/grid.hpp"

namespace viscotherm {

/// Centered differences inside, second-order one-sided differences at the two ends.
std::vector<double> d1_centered(std::span<const double> field, const Grid& grid);

/// Centered differences inside, first-order one-sided differences at the ends. This is
/// the trapezoid-weighted adjoint of -d1_centered on fields vanishing at the boundary:
///   trapezoid(g * d1_adjoint(v)) == -trapezoid(v * d1_centered(g))   when v_0 = v_{n-1} = 0.
/// The boundary rows stay second-order accurate when v_xx = 0 there.
std::vector<double> d1_adjoint(std::span<const double> field, const Grid& grid);

/// Conservative discretisation of (c f_x)_x with arithmetic half-node coefficients
/// c_{i+1/2} = (c_i + c_{i+1})/2. Boundary rows are zero (the field is Dirichlet there).
/// Throws when a coefficient node is not positive.
std::vector<double> flux_divergence(std::span<const double> coef_nodes,
                                    std::span<const double> field, const Grid& grid);
BandedOperator flux_divergence_operator(std::span<const double> coef_nodes, const Grid& grid);

/// Second difference for Dirichlet fields; boundary rows are zero.
std::vector<double> laplacian_dirichlet(std::span<const double> field, const Grid& grid);
BandedOperator laplacian_dirichlet_operator(const Grid& grid);

/// Second difference with reflecting ghosts f_{-1} = f_1, f_n = f_{n-2}. Row sums vanish
/// and trapezoid(laplacian_neumann(f)) == 0 for every f.
std::vector<double> laplacian_neumann(std::span<const double> field, const Grid& grid);
BandedOperator laplacian_neumann_operator(const Grid& grid);

/// Square of the Dirichlet Laplacian: the fourth derivative under v = v_xx = 0.
/// For boundary-vanishing v, trapezoid(v * biharmonic_navier(v)) == trapezoid(L_D v ^ 2).
std::vector<double> biharmonic_navier(std::span<const double> field, const Grid& grid);
BandedOperator biharmonic_navier_operator(const Grid& grid);

/// Nodal density of c f_x^2 compatible with flux_divergence: the half-cell values
/// c_{i+1/2} ((f_{i+1} - f_i)/dx)^2 averaged onto the nodes, so that for fields vanishing
/// at the boundary  trapezoid(dissipation_density(c, f)) == -trapezoid(f * flux_divergence(c, f)).
std::vector<double> dissipation_density(std::span<const double> coef_nodes,
                                        std::span<const double> field, const Grid& grid);

/// sum over half cells of (f_{i+1} - f_i)^2 / dx, the discrete int f_x^2 that matches
/// -trapezoid(f * laplacian_dirichlet(f)) for boundary-vanishing f.
double gradient_energy(std::span<const double> field, const Grid& grid);

}  // namespace viscotherm
