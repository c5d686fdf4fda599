// Dense reference computations shared by the unit tests. Everything here goes through
// Eigen's dense solvers so the library's sparse and iterative paths are checked
// independently.

#ifndef RBHIER_TESTS_SUPPORT_HPP
#define RBHIER_TESTS_SUPPORT_HPP

#include <complex>
#include <Eigen/Eigenvalues>
#include "rbhier/benchmarks.hpp"

namespace support
{

using namespace rbhier;

inline Matrix dense(const SparseMatrix &s) { return Matrix(s); }

inline double dense_norm(const SparseMatrix &gram, const Vector &v)
{
  return std::sqrt(std::max(0.0, (v.adjoint() * dense(gram) * v)(0, 0).real()));
}

// sqrt(Rᴴ G⁻¹ R) with a dense LDLᵀ.
inline double dense_dual_norm(const SparseMatrix &gram, const Vector &r)
{
  const Vector v = dense(gram).ldlt().solve(r);
  return std::sqrt(std::max(0.0, r.dot(v).real()));
}

// Eigenvalues of the Hermitian pencil H v = λ G v.
inline Eigen::VectorXd pencil_eigenvalues(const Matrix &h, const Matrix &g)
{
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(h, g, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// (β, γ) from the pencil AᴴG⁻¹A v = λ G v.
inline std::pair<double, double> dense_beta_gamma(const SparseMatrix &a, const SparseMatrix &g)
{
  const Matrix A = dense(a), G = dense(g);
  Matrix H = A.adjoint() * G.ldlt().solve(A);
  H = 0.5 * (H + H.adjoint().eval());
  const auto ev = pencil_eigenvalues(H, G);
  return {std::sqrt(std::max(0.0, ev.minCoeff())), std::sqrt(ev.maxCoeff())};
}

// Closed-form solution of -u'' - μ²u = r, u(0) = 0, u'(1) + iμu(1) = g.
inline std::complex<double> helmholtz_exact(double x, double mu, double r, double g)
{
  using namespace std::complex_literals;
  const double c1 = r / (mu * mu);
  const std::complex<double> c2 =
    (g + c1 * mu * std::sin(mu) - 1.0i * mu * c1 * std::cos(mu) + 1.0i * r / mu) /
    (mu * std::exp(1.0i * mu));
  return -r / (mu * mu) + c1 * std::cos(mu * x) + c2 * std::sin(mu * x);
}

inline TruthModel small_thermal(int cells = 6) { return build_thermal_block({cells}); }

inline TruthModel small_helmholtz(double lo, double hi, int elements = 12, int degree = 5)
{
  HelmholtzConfig cfg;
  cfg.elements = elements;
  cfg.degree = degree;
  cfg.reference_wavenumber = 0.5 * (lo + hi);
  return build_helmholtz_1d(cfg);
}

inline Parameter p1(double a)
{
  Parameter mu(1);
  mu << a;
  return mu;
}

inline Parameter p2(double a, double b)
{
  Parameter mu(2);
  mu << a, b;
  return mu;
}

}  // namespace support

#endif
