// SPDX-License-Identifier: Apache-2.0

#include "rbhier/truth_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbhier
{

TruthModel::TruthModel(std::string name, Field field, Terms terms, Parameter reference)
  : name_(std::move(name)), field_(field), t_(std::move(terms)), reference_(std::move(reference))
{
  if (t_.a.empty() || t_.f.empty() || t_.gram.empty())
  {
    throw PreconditionError("TruthModel: need at least one operator, rhs and Gramian term");
  }
  if (t_.a.size() != t_.theta_a.size() || t_.f.size() != t_.theta_f.size() ||
      t_.gram.size() != t_.theta_gram.size())
  {
    throw PreconditionError("TruthModel: term and coefficient counts differ");
  }
  dofs_ = static_cast<int>(t_.a.front().rows());
  auto square = [this](const SparseMatrix &M)
  { return M.rows() == dofs_ && M.cols() == dofs_; };
  if (!std::all_of(t_.a.begin(), t_.a.end(), square) ||
      !std::all_of(t_.gram.begin(), t_.gram.end(), square) ||
      !std::all_of(t_.f.begin(), t_.f.end(),
                   [this](const Vector &f) { return f.size() == dofs_; }))
  {
    throw PreconditionError("TruthModel: inconsistent term dimensions");
  }
  if (t_.gram.size() == 1 && t_.theta_gram[0](reference_) != Scalar(1.0))
  {
    throw PreconditionError("TruthModel: a fixed Gramian must carry the coefficient 1");
  }
  for (auto &M : t_.a)
  {
    M.makeCompressed();
  }
  for (auto &M : t_.gram)
  {
    M.makeCompressed();
  }
}

SparseMatrix combine(const std::vector<SparseMatrix> &terms, const Vector &weights)
{
  SparseMatrix out = weights[0] * terms[0];
  for (std::size_t q = 1; q < terms.size(); q++)
  {
    out += weights[static_cast<Eigen::Index>(q)] * terms[q];
  }
  out.makeCompressed();
  return out;
}

SparseMatrix TruthModel::assemble_operator(const Parameter &mu) const
{
  return combine(t_.a, evaluate(t_.theta_a, mu));
}

Vector TruthModel::assemble_rhs(const Parameter &mu) const
{
  const Vector w = evaluate(t_.theta_f, mu);
  Vector out = w[0] * t_.f[0];
  for (std::size_t q = 1; q < t_.f.size(); q++)
  {
    out += w[static_cast<Eigen::Index>(q)] * t_.f[q];
  }
  return out;
}

SparseMatrix TruthModel::gram(const Parameter &mu) const
{
  return combine(t_.gram, evaluate(t_.theta_gram, mu));
}

double TruthModel::norm_sq(const Vector &v, const Parameter &mu) const
{
  double s = 0.0;
  for (std::size_t r = 0; r < t_.gram.size(); r++)
  {
    const double sigma = t_.theta_gram[r](mu).real();
    s += sigma * v.dot(t_.gram[r] * v).real();
  }
  return std::max(s, 0.0);
}

double TruthModel::norm(const Vector &v, const Parameter &mu) const
{
  return std::sqrt(norm_sq(v, mu));
}

TruthModel::GramBounds TruthModel::gram_bounds(const Parameter &mu) const
{
  if (!gram_is_affine())
  {
    return {};
  }
  GramBounds b{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto &sigma : t_.theta_gram)
  {
    const double s = sigma(mu).real(), s_ref = sigma(reference_).real();
    if (!(s > 0.0) || !(s_ref > 0.0))
    {
      throw PreconditionError("gram_bounds: Gramian coefficients must be positive");
    }
    b.lower = std::min(b.lower, s / s_ref);
    b.upper = std::max(b.upper, s / s_ref);
  }
  return b;
}

TruthSolver::TruthSolver(const TruthModel &model, const Parameter &mu)
  : mu_(mu), A_(model.assemble_operator(mu)),
    lu_(std::make_unique<Eigen::SparseLU<SparseMatrix>>())
{
  lu_->analyzePattern(A_);
  lu_->factorize(A_);
  if (lu_->info() != Eigen::Success)
  {
    throw SingularSystemError("truth factorization failed", mu_, model.dofs());
  }
}

Vector TruthSolver::solve(const Vector &rhs) const
{
  Vector x = lu_->solve(rhs);
  const double rn = rhs.norm();
  if (lu_->info() != Eigen::Success || !x.allFinite() ||
      (rn > 0.0 && (A_ * x - rhs).norm() > 1e-8 * rn))
  {
    throw SingularSystemError("truth solve is (near-)singular", mu_,
                              static_cast<int>(A_.rows()));
  }
  return x;
}

Vector truth_solve(const TruthModel &model, const Parameter &mu)
{
  return TruthSolver(model, mu).solve(model.assemble_rhs(mu));
}

GramSolver::GramSolver(const SparseMatrix &gram)
  : G_(gram), llt_(std::make_unique<Eigen::SimplicialLLT<SparseMatrix>>(gram))
{
  if (llt_->info() != Eigen::Success)
  {
    throw PreconditionError("GramSolver: Gramian is not Hermitian positive definite");
  }
}

Vector GramSolver::solve(const Vector &rhs) const
{
  return llt_->solve(rhs);
}

Matrix GramSolver::solve(const Matrix &rhs) const
{
  return llt_->solve(rhs);
}

Vector riesz_representer(const TruthModel &model, const Vector &functional,
                         const std::optional<Parameter> &mu)
{
  if (functional.size() != model.dofs())
  {
    throw PreconditionError("riesz_representer: functional length differs from dofs");
  }
  if (model.gram_is_affine() && !mu)
  {
    throw PreconditionError("riesz_representer: parameter required for an affine Gramian");
  }
  if (functional.squaredNorm() == 0.0)
  {
    return Vector::Zero(functional.size());
  }
  const SparseMatrix G = model.gram_is_affine() ? model.gram(*mu) : model.gram_terms()[0];
  return GramSolver(G).solve(functional);
}

double dual_norm(const Vector &functional, const Vector &representer)
{
  return std::sqrt(std::max(representer.dot(functional).real(), 0.0));
}

}  // namespace rbhier
