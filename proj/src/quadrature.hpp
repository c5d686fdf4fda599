// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_SRC_QUADRATURE_HPP
#define RBHIER_SRC_QUADRATURE_HPP

#include <vector>

namespace rbhier::detail
{

struct Rule
{
  std::vector<double> nodes, weights;
};

// n-point Gauss–Legendre rule on [-1, 1] (exact for degree 2n-1).
Rule gauss_legendre(int n);

// (p+1)-point Gauss–Lobatto–Legendre rule on [-1, 1] (nodes of degree-p spectral elements).
Rule gauss_lobatto(int p);

// Values and first derivatives of the Lagrange polynomials on `nodes`, evaluated at x:
// value[i], deriv[i] for basis function i.
void lagrange_basis(const std::vector<double> &nodes, double x, std::vector<double> &value,
                    std::vector<double> &deriv);

}  // namespace rbhier::detail

#endif  // RBHIER_SRC_QUADRATURE_HPP
