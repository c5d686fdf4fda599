// SPDX-License-Identifier: Apache-2.0

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Eigenvalues>
#include "rbhier/types.hpp"

namespace rbhier::detail
{

namespace
{

// Eigen-decomposition of the symmetric tridiagonal Jacobi matrix with zero diagonal.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi_eigen(const std::vector<double> &offdiag)
{
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; k++)
  {
    J(k, k + 1) = J(k + 1, k) = offdiag[k];
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(J);
}

double legendre(int p, double x)
{
  double p0 = 1.0, p1 = x;
  if (p == 0)
  {
    return p0;
  }
  for (int k = 1; k < p; k++)
  {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

Rule gauss_legendre(int n)
{
  if (n < 1)
  {
    throw PreconditionError("gauss_legendre: need n >= 1");
  }
  if (n == 1)
  {
    return {{0.0}, {2.0}};
  }
  std::vector<double> b(n - 1);
  for (int k = 1; k < n; k++)
  {
    b[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  }
  const auto es = jacobi_eigen(b);
  Rule r;
  for (int i = 0; i < n; i++)
  {
    r.nodes.push_back(es.eigenvalues()[i]);
    r.weights.push_back(2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
  }
  return r;
}

Rule gauss_lobatto(int p)
{
  if (p < 1)
  {
    throw PreconditionError("gauss_lobatto: need degree >= 1");
  }
  Rule r;
  r.nodes.push_back(-1.0);
  if (p >= 2)
  {
    // Interior nodes: zeros of P'_p, i.e. Gauss–Jacobi(1,1) nodes of order p-1.
    std::vector<double> b(p - 2);
    for (int k = 1; k <= p - 2; k++)
    {
      b[k - 1] = std::sqrt(k * (k + 2.0) / ((2.0 * k + 1.0) * (2.0 * k + 3.0)));
    }
    if (p == 2)
    {
      r.nodes.push_back(0.0);
    }
    else
    {
      const auto es = jacobi_eigen(b);
      for (int i = 0; i < p - 1; i++)
      {
        r.nodes.push_back(es.eigenvalues()[i]);
      }
    }
  }
  r.nodes.push_back(1.0);
  std::sort(r.nodes.begin(), r.nodes.end());
  for (double x : r.nodes)
  {
    const double L = legendre(p, x);
    r.weights.push_back(2.0 / (p * (p + 1.0) * L * L));
  }
  return r;
}

void lagrange_basis(const std::vector<double> &nodes, double x, std::vector<double> &value,
                    std::vector<double> &deriv)
{
  const std::size_t n = nodes.size();
  value.assign(n, 0.0);
  deriv.assign(n, 0.0);
  for (std::size_t i = 0; i < n; i++)
  {
    double v = 1.0, denom = 1.0;
    for (std::size_t j = 0; j < n; j++)
    {
      if (j != i)
      {
        v *= x - nodes[j];
        denom *= nodes[i] - nodes[j];
      }
    }
    value[i] = v / denom;
    // d/dx Π_{j≠i}(x - x_j) = Σ_{m≠i} Π_{j≠i,m}(x - x_j)
    double d = 0.0;
    for (std::size_t m = 0; m < n; m++)
    {
      if (m == i)
      {
        continue;
      }
      double t = 1.0;
      for (std::size_t j = 0; j < n; j++)
      {
        if (j != i && j != m)
        {
          t *= x - nodes[j];
        }
      }
      d += t;
    }
    deriv[i] = d / denom;
  }
}

}  // namespace rbhier::detail
