// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_BENCHMARKS_HPP
#define RBHIER_BENCHMARKS_HPP

#include <functional>
#include "rbhier/truth_model.hpp"

namespace rbhier
{

//
// Thermal block on (0,1)² with 3×3 subblocks: conductivity μ_1 on the blocks Ω_1, Ω_3, ...
// (checkerboard containing the corners) and μ_2 on the others. Unit Neumann flux on the
// bottom edge, homogeneous Neumann on the sides, homogeneous Dirichlet on the top edge.
// P1 elements on a uniform mesh, each square cell split along its diagonal.
//
struct ThermalBlockConfig
{
  int cells_per_side = 108;
};

// Q^a = 2 (odd-block and even-block stiffness), Q^f = 1, fixed X-Gramian A(1,1).
TruthModel build_thermal_block(const ThermalBlockConfig &cfg);

// Stiffness matrix for a cellwise coefficient alpha(x, y) evaluated at cell centroids, on
// the Dirichlet-reduced dof set. Used as an affine-free reference assembly.
SparseMatrix assemble_thermal_block_stiffness(const ThermalBlockConfig &cfg,
                                              const std::function<double(double, double)> &alpha);

// Coefficient α(x;μ) of the thermal block.
double thermal_block_conductivity(double x, double y, const Parameter &mu);

// (x, y) of every dof, one row per dof.
RealMatrix thermal_block_dof_coordinates(const ThermalBlockConfig &cfg);

//
// 1-D Helmholtz problem on (0,1): -u'' - μ²u = r, u(0) = 0, u'(1) + iμ u(1) = g, discretized
// with spectral elements (Lagrange basis on Gauss–Lobatto nodes, exact Gauss quadrature).
//
struct HelmholtzConfig
{
  int elements = 100;
  int degree = 6;
  double source = 1.0;  // r
  double robin = 0.0;   // g
  // Wavenumber μ_ref of the reference Gramian G(μ_ref); experiments use the midpoint of P.
  double reference_wavenumber = 1.0;
};

// Q^a = 3 with ϑ = (1, -μ², iμ) and A_q = (K, M, B); X-Gramian G(μ) = K + μ² M.
TruthModel build_helmholtz_1d(const HelmholtzConfig &cfg);

// x coordinate of every dof.
RealVector helmholtz_dof_coordinates(const HelmholtzConfig &cfg);

}  // namespace rbhier

#endif  // RBHIER_BENCHMARKS_HPP
