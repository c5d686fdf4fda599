// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_REDUCED_BASIS_HPP
#define RBHIER_REDUCED_BASIS_HPP

#include <memory>
#include <string>
#include <vector>
#include "rbhier/container.hpp"
#include "rbhier/truth_model.hpp"

namespace rbhier
{

// Origin of a snapshot offered to a basis. order 0 is a Lagrange snapshot u(μ_n); order k ≥ 1
// with direction i is the Taylor snapshot ∂^k u / ∂μ_i^k (μ_n).
struct SnapshotTag
{
  int n = 0;
  int direction = 0;
  int order = 0;
  Parameter mu;
  bool kept = false;
};

//
// Columns ξ_1..ξ_M orthonormal in the fixed frame G_ref = G(μ_ref) of a truth model. Columns
// are only ever appended, so every prefix of length N is a basis of X_N.
//
class ReducedBasis
{
public:
  ReducedBasis() = default;
  ReducedBasis(std::shared_ptr<const SparseMatrix> gram, std::string frame);

  int size() const { return static_cast<int>(xi_.cols()); }
  int dofs() const { return static_cast<int>(xi_.rows()); }
  const Matrix &matrix() const { return xi_; }
  const SparseMatrix &gram() const { return *gram_; }
  const std::string &frame() const { return frame_; }
  const std::vector<SnapshotTag> &log() const { return log_; }

  // First n columns; the snapshot log is kept as is.
  ReducedBasis prefix(int n) const;

  // Two-pass Gram–Schmidt in the frame inner product, one column per snapshot. A snapshot is
  // dropped when its orthogonal part is ≤ drop_tol times its own norm. Returns the number of
  // columns added.
  int extend_gram_schmidt(const std::vector<Vector> &snapshots, std::vector<SnapshotTag> tags,
                          double drop_tol = 1e-10);

  // Projects the batch onto the orthogonal complement of the current columns, then appends
  // its POD modes with σ_k > drop_tol·σ_1, where σ_1 is the leading singular value of the
  // unprojected batch. Existing columns are untouched.
  int extend_pod(const std::vector<Vector> &snapshots, std::vector<SnapshotTag> tags,
                 double drop_tol = 1e-10);

  // ‖Ξᴴ G Ξ − I‖_max.
  double orthonormality_defect() const;

  void save(Container &c, const std::string &prefix) const;
  static ReducedBasis load(const Container &c, const std::string &prefix,
                           std::shared_ptr<const SparseMatrix> gram);

private:
  double frame_norm(const Vector &v) const;
  bool append_orthogonalized(Vector v, double reference_norm, double drop_tol);

  std::shared_ptr<const SparseMatrix> gram_;
  std::string frame_;
  Matrix xi_;
  Matrix gxi_;  // G_ref Ξ, kept alongside Ξ for cheap projections
  std::vector<SnapshotTag> log_;
};

// Empty basis in the model's reference frame.
ReducedBasis make_basis(const TruthModel &model);

// Fresh basis from a snapshot batch via POD.
ReducedBasis orthonormalize_pod(const TruthModel &model, const std::vector<Vector> &snapshots,
                                std::vector<SnapshotTag> tags, double drop_tol = 1e-10);

//
// Parameter-independent reduced blocks
//   A_q = Ξᴴ A_q Ξ,  F_q = Ξᴴ F_q,  G_r = Ξᴴ G_r Ξ.
// Every leading n×n sub-block is the reduced model of the prefix basis.
//
class ReducedModel
{
public:
  ReducedModel(std::vector<Matrix> a, std::vector<ThetaFunction> theta_a, std::vector<Vector> f,
               std::vector<ThetaFunction> theta_f, std::vector<Matrix> gram,
               std::vector<ThetaFunction> theta_gram);

  int size() const { return static_cast<int>(a_.empty() ? 0 : a_[0].rows()); }
  const std::vector<Matrix> &a_blocks() const { return a_; }
  const std::vector<Vector> &f_blocks() const { return f_; }
  const std::vector<Matrix> &gram_blocks() const { return gram_; }

  Matrix assemble_operator(const Parameter &mu, int n) const;
  Vector assemble_rhs(const Parameter &mu, int n) const;
  Matrix gram(const Parameter &mu, int n) const;

  ReducedModel prefix(int n) const;

  // Theta functions are not serialized; load takes them from the truth model.
  void save(Container &c, const std::string &prefix) const;
  static ReducedModel load(const Container &c, const std::string &prefix,
                           const TruthModel &model);

private:
  std::vector<Matrix> a_;
  std::vector<ThetaFunction> theta_a_;
  std::vector<Vector> f_;
  std::vector<ThetaFunction> theta_f_;
  std::vector<Matrix> gram_;
  std::vector<ThetaFunction> theta_gram_;
};

ReducedModel project(const TruthModel &model, const ReducedBasis &basis);

// Galerkin solve of the leading n×n system at μ. Throws SingularSystemError carrying μ and n
// when the reduced matrix is numerically singular.
Vector rb_solve(const ReducedModel &rm, const Parameter &mu, int n);

// Σ_i coeffs_i ξ_i over the first coeffs.size() columns.
Vector reconstruct(const ReducedBasis &basis, const Vector &coeffs);

}  // namespace rbhier

#endif  // RBHIER_REDUCED_BASIS_HPP
