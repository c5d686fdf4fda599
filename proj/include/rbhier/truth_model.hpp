// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_TRUTH_MODEL_HPP
#define RBHIER_TRUTH_MODEL_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include "rbhier/theta.hpp"
#include "rbhier/types.hpp"

namespace rbhier
{

//
// Affine-decomposed truth discretization:
//   A(μ) = Σ_q ϑ^a_q(μ) A_q,  F(μ) = Σ_q ϑ^f_q(μ) F_q,  G(μ) = Σ_r σ_r(μ) G_r,
// where G is the X-inner-product Gramian. A fixed Gramian is a single term with σ ≡ 1.
// Matrices follow the convention (A)_{ij} = a(φ_j, φ_i), so the truth system is A u = F.
//
class TruthModel
{
public:
  struct Terms
  {
    std::vector<SparseMatrix> a;
    std::vector<ThetaFunction> theta_a;
    std::vector<Vector> f;
    std::vector<ThetaFunction> theta_f;
    std::vector<SparseMatrix> gram;
    std::vector<ThetaFunction> theta_gram;
  };

  // `reference` is the parameter at which the fixed orthonormalization / residual frame
  // G_ref = G(reference) is taken; irrelevant when the Gramian is fixed.
  TruthModel(std::string name, Field field, Terms terms, Parameter reference);

  const std::string &name() const { return name_; }
  Field field() const { return field_; }
  int dofs() const { return dofs_; }
  int num_a() const { return static_cast<int>(t_.a.size()); }
  int num_f() const { return static_cast<int>(t_.f.size()); }
  int num_gram() const { return static_cast<int>(t_.gram.size()); }
  int parameter_dim() const { return static_cast<int>(reference_.size()); }

  const std::vector<SparseMatrix> &a_terms() const { return t_.a; }
  const std::vector<Vector> &f_terms() const { return t_.f; }
  const std::vector<SparseMatrix> &gram_terms() const { return t_.gram; }
  const std::vector<ThetaFunction> &theta_a() const { return t_.theta_a; }
  const std::vector<ThetaFunction> &theta_f() const { return t_.theta_f; }
  const std::vector<ThetaFunction> &theta_gram() const { return t_.theta_gram; }

  bool gram_is_affine() const { return t_.gram.size() > 1; }
  const Parameter &reference_parameter() const { return reference_; }

  SparseMatrix assemble_operator(const Parameter &mu) const;
  Vector assemble_rhs(const Parameter &mu) const;
  SparseMatrix gram(const Parameter &mu) const;
  SparseMatrix reference_gram() const { return gram(reference_); }

  // ‖v‖²_{X(μ)} = Σ_r σ_r(μ) Re(vᴴ G_r v), without assembling G(μ).
  double norm_sq(const Vector &v, const Parameter &mu) const;
  double norm(const Vector &v, const Parameter &mu) const;

  // Constants c_lo, c_hi with c_lo·G_ref ≤ G(μ) ≤ c_hi·G_ref, valid when every G_r is
  // positive semidefinite and every σ_r is positive: c = min/max_r σ_r(μ)/σ_r(μ_ref).
  struct GramBounds
  {
    double lower = 1.0, upper = 1.0;
  };
  GramBounds gram_bounds(const Parameter &mu) const;

private:
  std::string name_;
  Field field_;
  Terms t_;
  Parameter reference_;
  int dofs_;
};

// Weighted sum Σ_q w_q M_q of equally-sized sparse matrices.
SparseMatrix combine(const std::vector<SparseMatrix> &terms, const Vector &weights);

//
// Sparse LU factorization of A(μ); reusable for several right-hand sides (e.g. Taylor
// snapshots at the same parameter).
//
class TruthSolver
{
public:
  TruthSolver(const TruthModel &model, const Parameter &mu);

  // Solves A(μ) x = rhs. Throws SingularSystemError if the factorization failed or the
  // relative residual exceeds 1e-8.
  Vector solve(const Vector &rhs) const;
  const Parameter &parameter() const { return mu_; }
  const SparseMatrix &matrix() const { return A_; }

private:
  Parameter mu_;
  SparseMatrix A_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
};

Vector truth_solve(const TruthModel &model, const Parameter &mu);

// Cholesky factorization of a Hermitian positive definite Gramian.
class GramSolver
{
public:
  explicit GramSolver(const SparseMatrix &gram);
  Vector solve(const Vector &rhs) const;
  Matrix solve(const Matrix &rhs) const;
  const SparseMatrix &matrix() const { return G_; }

private:
  SparseMatrix G_;
  std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>> llt_;
};

// v with G(μ) v = functional. `mu` is required when the Gramian is affine; with a fixed
// Gramian it is ignored.
Vector riesz_representer(const TruthModel &model, const Vector &functional,
                         const std::optional<Parameter> &mu = std::nullopt);

// sqrt(Re(vᴴ functional)) with v the Riesz representer, clamped at zero.
double dual_norm(const Vector &functional, const Vector &representer);

}  // namespace rbhier

#endif  // RBHIER_TRUTH_MODEL_HPP
