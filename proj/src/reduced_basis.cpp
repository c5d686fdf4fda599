// SPDX-License-Identifier: Apache-2.0

#include "rbhier/reduced_basis.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace rbhier
{

ReducedBasis::ReducedBasis(std::shared_ptr<const SparseMatrix> gram, std::string frame)
  : gram_(std::move(gram)), frame_(std::move(frame)), xi_(gram_->rows(), 0),
    gxi_(gram_->rows(), 0)
{
}

ReducedBasis ReducedBasis::prefix(int n) const
{
  if (n < 0 || n > size())
  {
    throw PreconditionError("ReducedBasis::prefix: n = " + std::to_string(n) +
                            " outside [0, " + std::to_string(size()) + "]");
  }
  ReducedBasis out(gram_, frame_);
  out.xi_ = xi_.leftCols(n);
  out.gxi_ = gxi_.leftCols(n);
  out.log_ = log_;
  return out;
}

double ReducedBasis::frame_norm(const Vector &v) const
{
  return std::sqrt(std::max(v.dot(*gram_ * v).real(), 0.0));
}

bool ReducedBasis::append_orthogonalized(Vector v, double reference_norm, double drop_tol)
{
  for (int pass = 0; pass < 2 && size() > 0; pass++)
  {
    const Vector c = gxi_.adjoint() * v;
    v -= xi_ * c;
  }
  const double nrm = frame_norm(v);
  if (!(nrm > drop_tol * reference_norm) || nrm == 0.0)
  {
    return false;
  }
  v /= nrm;
  xi_.conservativeResize(Eigen::NoChange, size() + 1);
  gxi_.conservativeResize(Eigen::NoChange, gxi_.cols() + 1);
  xi_.col(size() - 1) = v;
  gxi_.col(gxi_.cols() - 1) = *gram_ * v;
  return true;
}

int ReducedBasis::extend_gram_schmidt(const std::vector<Vector> &snapshots,
                                      std::vector<SnapshotTag> tags, double drop_tol)
{
  if (!(drop_tol > 0.0))
  {
    throw PreconditionError("extend_gram_schmidt: drop_tol must be positive");
  }
  tags.resize(snapshots.size());
  int added = 0;
  for (std::size_t s = 0; s < snapshots.size(); s++)
  {
    if (snapshots[s].size() != dofs())
    {
      throw PreconditionError("extend_gram_schmidt: snapshot length mismatch");
    }
    tags[s].kept = append_orthogonalized(snapshots[s], frame_norm(snapshots[s]), drop_tol);
    added += tags[s].kept;
    log_.push_back(tags[s]);
  }
  return added;
}

int ReducedBasis::extend_pod(const std::vector<Vector> &snapshots, std::vector<SnapshotTag> tags,
                             double drop_tol)
{
  if (!(drop_tol > 0.0))
  {
    throw PreconditionError("extend_pod: drop_tol must be positive");
  }
  if (snapshots.empty())
  {
    return 0;
  }
  const Eigen::Index k = static_cast<Eigen::Index>(snapshots.size());
  Matrix S(dofs(), k);
  for (Eigen::Index j = 0; j < k; j++)
  {
    if (snapshots[j].size() != dofs())
    {
      throw PreconditionError("extend_pod: snapshot length mismatch");
    }
    S.col(j) = snapshots[j];
  }

  // Leading singular value of the raw batch sets the drop threshold.
  auto correlation = [&](const Matrix &X)
  {
    Matrix C = X.adjoint() * (*gram_ * X);
    return Matrix(0.5 * (C + C.adjoint()));
  };
  Eigen::SelfAdjointEigenSolver<Matrix> raw(correlation(S), Eigen::EigenvaluesOnly);
  const double sigma1 = std::sqrt(std::max(raw.eigenvalues()[k - 1], 0.0));

  for (int pass = 0; pass < 2 && size() > 0; pass++)
  {
    S -= xi_ * (gxi_.adjoint() * S);
  }

  // S = Q R with Q orthonormal in the frame (two-pass Gram–Schmidt), then the POD modes are
  // Q U from the SVD of the small factor R. Unlike the correlation matrix SᴴGS this resolves
  // singular values down to round-off relative to σ_1.
  Matrix Q = Matrix::Zero(dofs(), k), GQ = Matrix::Zero(dofs(), k);
  Matrix R = Matrix::Zero(k, k);
  for (Eigen::Index j = 0; j < k; j++)
  {
    Vector v = S.col(j);
    for (int pass = 0; pass < 2 && j > 0; pass++)
    {
      const Vector c = GQ.leftCols(j).adjoint() * v;
      R.col(j).head(j) += c;
      v -= Q.leftCols(j) * c;
    }
    const double nrm = frame_norm(v);
    if (nrm > 0.0)
    {
      R(j, j) = nrm;
      Q.col(j) = v / nrm;
      GQ.col(j) = *gram_ * Q.col(j);
    }
  }
  Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeFullU);

  int added = 0;
  for (Eigen::Index j = 0; j < k; j++)
  {
    const double sigma = svd.singularValues()[j];
    if (!(sigma > drop_tol * sigma1))
    {
      break;
    }
    const Vector mode = Q * svd.matrixU().col(j);
    added += append_orthogonalized(mode, 1.0, drop_tol);
  }

  tags.resize(snapshots.size());
  for (auto &t : tags)
  {
    t.kept = added > 0;
    log_.push_back(t);
  }
  return added;
}

double ReducedBasis::orthonormality_defect() const
{
  if (size() == 0)
  {
    return 0.0;
  }
  const Matrix I = Matrix::Identity(size(), size());
  return (xi_.adjoint() * gxi_ - I).cwiseAbs().maxCoeff();
}

void ReducedBasis::save(Container &c, const std::string &prefix) const
{
  c.put(prefix + "/xi", xi_);
  c.put_text(prefix + "/frame", frame_);
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto &t : log_)
  {
    os << t.n << ' ' << t.direction << ' ' << t.order << ' ' << t.kept << ' ' << t.mu.size();
    for (double m : t.mu)
    {
      os << ' ' << m;
    }
    os << '\n';
  }
  c.put_text(prefix + "/log", os.str());
}

ReducedBasis ReducedBasis::load(const Container &c, const std::string &prefix,
                                std::shared_ptr<const SparseMatrix> gram)
{
  ReducedBasis out(std::move(gram), c.text(prefix + "/frame"));
  out.xi_ = c.complex_matrix(prefix + "/xi");
  if (out.xi_.rows() != out.gram_->rows())
  {
    throw IoError("ReducedBasis::load: basis and Gramian sizes differ");
  }
  out.gxi_ = *out.gram_ * out.xi_;
  std::istringstream is(c.text(prefix + "/log"));
  SnapshotTag t;
  int p = 0;
  while (is >> t.n >> t.direction >> t.order >> t.kept >> p)
  {
    t.mu.resize(p);
    for (int j = 0; j < p; j++)
    {
      is >> t.mu[j];
    }
    out.log_.push_back(t);
  }
  return out;
}

ReducedBasis make_basis(const TruthModel &model)
{
  auto gram = std::make_shared<const SparseMatrix>(model.reference_gram());
  const std::string frame =
    model.gram_is_affine() ? "G(" + to_string(model.reference_parameter()) + ")" : "G";
  return ReducedBasis(std::move(gram), frame);
}

ReducedBasis orthonormalize_pod(const TruthModel &model, const std::vector<Vector> &snapshots,
                                std::vector<SnapshotTag> tags, double drop_tol)
{
  if (snapshots.empty())
  {
    throw PreconditionError("orthonormalize_pod: no snapshots");
  }
  auto basis = make_basis(model);
  basis.extend_pod(snapshots, std::move(tags), drop_tol);
  return basis;
}

ReducedModel::ReducedModel(std::vector<Matrix> a, std::vector<ThetaFunction> theta_a,
                           std::vector<Vector> f, std::vector<ThetaFunction> theta_f,
                           std::vector<Matrix> gram, std::vector<ThetaFunction> theta_gram)
  : a_(std::move(a)), theta_a_(std::move(theta_a)), f_(std::move(f)),
    theta_f_(std::move(theta_f)), gram_(std::move(gram)), theta_gram_(std::move(theta_gram))
{
  if (a_.empty() || a_.size() != theta_a_.size() || f_.size() != theta_f_.size() ||
      gram_.size() != theta_gram_.size())
  {
    throw PreconditionError("ReducedModel: term and coefficient counts differ");
  }
}

namespace
{

template <typename Block>
auto sum_terms(const std::vector<Block> &blocks, const Vector &w, int n)
{
  using Out = std::conditional_t<std::is_same_v<Block, Matrix>, Matrix, Vector>;
  Out out;
  if constexpr (std::is_same_v<Block, Matrix>)
  {
    out = Matrix::Zero(n, n);
    for (std::size_t q = 0; q < blocks.size(); q++)
    {
      out += w[q] * blocks[q].topLeftCorner(n, n);
    }
  }
  else
  {
    out = Vector::Zero(n);
    for (std::size_t q = 0; q < blocks.size(); q++)
    {
      out += w[q] * blocks[q].head(n);
    }
  }
  return out;
}

void check_prefix(int n, int size, const char *where)
{
  if (n < 1 || n > size)
  {
    throw PreconditionError(std::string(where) + ": dimension " + std::to_string(n) +
                            " outside [1, " + std::to_string(size) + "]");
  }
}

}  // namespace

Matrix ReducedModel::assemble_operator(const Parameter &mu, int n) const
{
  check_prefix(n, size(), "ReducedModel::assemble_operator");
  return sum_terms(a_, evaluate(theta_a_, mu), n);
}

Vector ReducedModel::assemble_rhs(const Parameter &mu, int n) const
{
  check_prefix(n, size(), "ReducedModel::assemble_rhs");
  return sum_terms(f_, evaluate(theta_f_, mu), n);
}

Matrix ReducedModel::gram(const Parameter &mu, int n) const
{
  check_prefix(n, size(), "ReducedModel::gram");
  return sum_terms(gram_, evaluate(theta_gram_, mu), n);
}

ReducedModel ReducedModel::prefix(int n) const
{
  check_prefix(n, size(), "ReducedModel::prefix");
  std::vector<Matrix> a, g;
  std::vector<Vector> f;
  for (const auto &b : a_)
  {
    a.push_back(b.topLeftCorner(n, n));
  }
  for (const auto &b : f_)
  {
    f.push_back(b.head(n));
  }
  for (const auto &b : gram_)
  {
    g.push_back(b.topLeftCorner(n, n));
  }
  return ReducedModel(std::move(a), theta_a_, std::move(f), theta_f_, std::move(g),
                      theta_gram_);
}

void ReducedModel::save(Container &c, const std::string &prefix) const
{
  for (std::size_t q = 0; q < a_.size(); q++)
  {
    c.put(prefix + "/a" + std::to_string(q), a_[q]);
  }
  for (std::size_t q = 0; q < f_.size(); q++)
  {
    c.put(prefix + "/f" + std::to_string(q), Matrix(f_[q]));
  }
  for (std::size_t r = 0; r < gram_.size(); r++)
  {
    c.put(prefix + "/g" + std::to_string(r), gram_[r]);
  }
}

ReducedModel ReducedModel::load(const Container &c, const std::string &prefix,
                                const TruthModel &model)
{
  std::vector<Matrix> a, g;
  std::vector<Vector> f;
  for (int q = 0; q < model.num_a(); q++)
  {
    a.push_back(c.complex_matrix(prefix + "/a" + std::to_string(q)));
  }
  for (int q = 0; q < model.num_f(); q++)
  {
    f.push_back(c.complex_matrix(prefix + "/f" + std::to_string(q)).col(0));
  }
  for (int r = 0; r < model.num_gram(); r++)
  {
    g.push_back(c.complex_matrix(prefix + "/g" + std::to_string(r)));
  }
  return ReducedModel(std::move(a), model.theta_a(), std::move(f), model.theta_f(),
                      std::move(g), model.theta_gram());
}

ReducedModel project(const TruthModel &model, const ReducedBasis &basis)
{
  if (basis.dofs() != model.dofs())
  {
    throw PreconditionError("project: basis and model sizes differ");
  }
  if (basis.size() < 1 || basis.size() > model.dofs())
  {
    throw PreconditionError("project: basis dimension must lie in [1, dofs]");
  }
  const Matrix &xi = basis.matrix();
  std::vector<Matrix> a, g;
  std::vector<Vector> f;
  for (const auto &A : model.a_terms())
  {
    a.push_back(xi.adjoint() * (A * xi));
  }
  for (const auto &F : model.f_terms())
  {
    f.push_back(xi.adjoint() * F);
  }
  for (const auto &G : model.gram_terms())
  {
    Matrix red = xi.adjoint() * (G * xi);
    g.push_back(0.5 * (red + red.adjoint()));
  }
  return ReducedModel(std::move(a), model.theta_a(), std::move(f), model.theta_f(),
                      std::move(g), model.theta_gram());
}

Vector rb_solve(const ReducedModel &rm, const Parameter &mu, int n)
{
  const Matrix A = rm.assemble_operator(mu, n);
  const Vector F = rm.assemble_rhs(mu, n);
  Eigen::PartialPivLU<Matrix> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
  {
    throw SingularSystemError("reduced system is singular (rcond " + std::to_string(rcond) +
                                ")",
                              mu, n);
  }
  return lu.solve(F);
}

Vector reconstruct(const ReducedBasis &basis, const Vector &coeffs)
{
  if (coeffs.size() > basis.size())
  {
    throw PreconditionError("reconstruct: more coefficients than basis columns");
  }
  return basis.matrix().leftCols(coeffs.size()) * coeffs;
}

}  // namespace rbhier
