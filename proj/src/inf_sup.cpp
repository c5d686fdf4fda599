// SPDX-License-Identifier: Apache-2.0

#include "rbhier/inf_sup.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rbhier
{

namespace
{

bool use_dense(EigenRoute route, Eigen::Index n, const EigenOptions &opts)
{
  return route == EigenRoute::dense ||
         (route == EigenRoute::automatic && n <= opts.dense_limit);
}

bool is_hermitian(const SparseMatrix &A)
{
  const SparseMatrix D = A - SparseMatrix(A.adjoint());
  return D.norm() <= 1e-13 * A.norm();
}

// L⁻¹ A L⁻ᴴ for the dense Cholesky factor of G.
struct DensePencil
{
  Eigen::LLT<Matrix> llt;
  Matrix B;

  DensePencil(const SparseMatrix &op, const SparseMatrix &gram) : llt(Matrix(gram))
  {
    if (llt.info() != Eigen::Success)
    {
      throw EigenSolverError("Gramian is not positive definite");
    }
    const auto L = llt.matrixL();
    const Matrix Y = L.solve(Matrix(op));
    B = L.solve(Matrix(Y.adjoint())).adjoint();
  }

  // v = L⁻ᴴ w
  Vector lift(const Vector &w) const { return llt.matrixU().solve(w); }
};

struct LanczosResult
{
  double value = 0.0;
  double residual = 0.0;
  Vector vector;
};

// Largest eigenvalue of an operator that is self-adjoint and positive semidefinite in the
// G-inner product, by Lanczos with full reorthogonalization.
LanczosResult lanczos_largest(const std::function<Vector(const Vector &)> &apply,
                              const SparseMatrix &G, const EigenOptions &opts)
{
  const Eigen::Index n = G.rows();
  std::mt19937_64 engine(opts.seed);
  std::normal_distribution<double> normal;
  Vector q(n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    q[i] = Scalar(normal(engine), normal(engine));
  }
  q /= std::sqrt(q.dot(G * q).real());

  const int max_steps = static_cast<int>(std::min<Eigen::Index>(opts.max_iterations, n));
  Matrix Q(n, max_steps), GQ(n, max_steps);
  std::vector<double> alpha, beta;
  LanczosResult res;
  for (int j = 0; j < max_steps; j++)
  {
    Q.col(j) = q;
    GQ.col(j) = G * q;
    Vector w = apply(q);
    alpha.push_back(GQ.col(j).dot(w).real());
    // Two passes of classical Gram–Schmidt against all Lanczos vectors.
    for (int pass = 0; pass < 2; pass++)
    {
      const Vector c = GQ.leftCols(j + 1).adjoint() * w;
      w -= Q.leftCols(j + 1) * c;
    }
    const double b = std::sqrt(std::max(w.dot(G * w).real(), 0.0));
    beta.push_back(b);

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j + 1, j + 1);
    for (int k = 0; k <= j; k++)
    {
      T(k, k) = alpha[k];
      if (k < j)
      {
        T(k, k + 1) = T(k + 1, k) = beta[k];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double theta = es.eigenvalues()[j];
    const Eigen::VectorXd s = es.eigenvectors().col(j);
    res.value = theta;
    res.residual = b * std::abs(s[j]);
    const bool breakdown = b <= 1e-14 * std::abs(theta);
    if (res.residual <= opts.tol * std::abs(theta) || breakdown || j + 1 == max_steps)
    {
      if (!breakdown && j + 1 == max_steps && j + 1 < n &&
          res.residual > 1e-6 * std::abs(theta))
      {
        throw EigenSolverError("Lanczos did not converge (relative residual " +
                               std::to_string(res.residual / std::abs(theta)) + ")");
      }
      res.vector = Q.leftCols(j + 1) * s.cast<Scalar>();
      return res;
    }
    q = w / b;
  }
  return res;
}

StabilityConstants dense_stability(const SparseMatrix &op, const SparseMatrix &gram)
{
  DensePencil pencil(op, gram);
  StabilityConstants out;
  Vector w;
  if (is_hermitian(op))
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(pencil.B);
    if (es.info() != Eigen::Success)
    {
      throw EigenSolverError("Hermitian eigensolver failed");
    }
    const Eigen::VectorXd mag = es.eigenvalues().cwiseAbs();
    Eigen::Index imin, imax;
    out.beta = mag.minCoeff(&imin);
    out.gamma = mag.maxCoeff(&imax);
    w = es.eigenvectors().col(imin);
  }
  else
  {
    Eigen::BDCSVD<Matrix> svd(pencil.B, Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    out.gamma = sv[0];
    out.beta = sv[sv.size() - 1];
    w = svd.matrixV().col(sv.size() - 1);
  }
  out.beta_mode = pencil.lift(w);
  return out;
}

StabilityConstants iterative_stability(const SparseMatrix &op, const SparseMatrix &gram,
                                       const EigenOptions &opts, bool with_gamma)
{
  Eigen::SparseLU<SparseMatrix> lu, lu_adj;
  lu.compute(op);
  const SparseMatrix opH = op.adjoint();
  lu_adj.compute(opH);
  if (lu.info() != Eigen::Success || lu_adj.info() != Eigen::Success)
  {
    throw EigenSolverError("operator factorization failed in the inf-sup solver");
  }
  GramSolver gs(gram);

  // 1/β² is the largest eigenvalue of A⁻¹ G A⁻ᴴ G.
  const auto inv = lanczos_largest([&](const Vector &x)
                                   { return Vector(lu.solve(gram * lu_adj.solve(gram * x))); },
                                   gram, opts);
  StabilityConstants out;
  out.beta = 1.0 / std::sqrt(inv.value);
  out.beta_mode = inv.vector;
  if (with_gamma)
  {
    // γ² is the largest eigenvalue of G⁻¹ Aᴴ G⁻¹ A.
    const auto fwd = lanczos_largest(
      [&](const Vector &x) { return gs.solve(Vector(opH * gs.solve(Vector(op * x)))); }, gram,
      opts);
    out.gamma = std::sqrt(fwd.value);
  }
  return out;
}

void normalize_mode(Vector &v, const SparseMatrix &gram)
{
  v /= std::sqrt(v.dot(gram * v).real());
}

}  // namespace

StabilityConstants stability_constants(const SparseMatrix &op, const SparseMatrix &gram,
                                       EigenRoute route, const EigenOptions &opts)
{
  if (op.rows() != gram.rows() || op.cols() != gram.cols() || op.rows() != op.cols())
  {
    throw PreconditionError("stability_constants: operator and Gramian sizes differ");
  }
  auto out = use_dense(route, op.rows(), opts) ? dense_stability(op, gram)
                                               : iterative_stability(op, gram, opts, true);
  normalize_mode(out.beta_mode, gram);
  return out;
}

StabilityConstants inf_sup_only(const SparseMatrix &op, const SparseMatrix &gram,
                                EigenRoute route, const EigenOptions &opts)
{
  if (op.rows() != gram.rows() || op.cols() != gram.cols() || op.rows() != op.cols())
  {
    throw PreconditionError("inf_sup_only: operator and Gramian sizes differ");
  }
  StabilityConstants out;
  if (use_dense(route, op.rows(), opts))
  {
    out = dense_stability(op, gram);
    out.gamma = 0.0;
  }
  else
  {
    out = iterative_stability(op, gram, opts, false);
  }
  normalize_mode(out.beta_mode, gram);
  return out;
}

StabilityConstants exact_inf_sup(const TruthModel &model, const Parameter &mu,
                                 EigenRoute route, const EigenOptions &opts)
{
  return stability_constants(model.assemble_operator(mu), model.gram(mu), route, opts);
}

StabilityConstants reference_inf_sup(const TruthModel &model, const Parameter &mu,
                                     EigenRoute route, const EigenOptions &opts)
{
  return stability_constants(model.assemble_operator(mu), model.reference_gram(), route,
                             opts);
}

PencilExtremes hermitian_pencil_extremes(const SparseMatrix &herm, const SparseMatrix &gram,
                                         EigenRoute route, const EigenOptions &opts)
{
  PencilExtremes out;
  if (use_dense(route, herm.rows(), opts))
  {
    DensePencil pencil(herm, gram);
    // Symmetrize against round-off before the Hermitian solver.
    const Matrix B = 0.5 * (pencil.B + pencil.B.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(B);
    out.lower = es.eigenvalues()[0];
    out.upper = es.eigenvalues()[es.eigenvalues().size() - 1];
    out.lower_mode = pencil.lift(es.eigenvectors().col(0));
  }
  else
  {
    // Shift so both extremes become the largest eigenvalue of a PSD operator.
    GramSolver gs(gram);
    const auto top = lanczos_largest([&](const Vector &x) { return gs.solve(Vector(herm * x)); },
                                     gram, opts);
    const double shift = std::abs(top.value) + top.residual;
    const auto bottom = lanczos_largest([&](const Vector &x)
                                        { return Vector(shift * x - gs.solve(Vector(herm * x))); },
                                        gram, opts);
    out.upper = top.value + top.residual;
    out.lower = shift - bottom.value - bottom.residual;
    out.lower_mode = bottom.vector;
  }
  normalize_mode(out.lower_mode, gram);
  return out;
}

}  // namespace rbhier
