// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_TAYLOR_HPP
#define RBHIER_TAYLOR_HPP

#include <vector>
#include "rbhier/reduced_basis.hpp"

namespace rbhier
{

// Right-hand side of the recursion for u_i^(k):
//   ∂^k F/∂μ_i^k − Σ_{m=1..k} C(k,m) (Σ_q ∂^m ϑ_q/∂μ_i^m A_q) u_i^(k−m).
// `lower` holds u_i^(0..k−1); `direction` is 0-based. Terms whose coefficient derivatives
// all vanish are skipped.
Vector taylor_rhs(const TruthModel &model, const Parameter &mu, int direction, int k,
                  const std::vector<Vector> &lower);

// u_i^(k)(μ) by one back-substitution with the factorization of A(μ).
Vector taylor_snapshot(const TruthModel &model, const TruthSolver &solver, int direction, int k,
                       const std::vector<Vector> &lower);

// u_i^(1..order) at the solver's parameter, given u = u_i^(0).
std::vector<Vector> taylor_derivatives(const TruthModel &model, const TruthSolver &solver,
                                       int direction, int order, const Vector &u);

// Per-snapshot derivative orders K_n (a single entry is applied to every n).
struct TaylorConfig
{
  std::vector<int> orders;
  int order_for(std::size_t n) const;
};

struct TaylorSpace
{
  ReducedBasis basis;  // prefix = base
  int nominal_m = 0;   // Σ_n (1 + K_n P)
  int effective_m = 0;
  std::vector<Vector> snapshots;     // derivative snapshots in generation order
  std::vector<SnapshotTag> tags;     // (n, i, k) with 1-based n and i
};

// Appends the pure per-direction derivatives up to K_n at every μ_n to `base`, which must
// already span the Lagrange snapshots at S_N. Throws PreconditionError when some K_n > 0 but
// every derivative snapshot is dropped.
TaylorSpace build_taylor_space(const TruthModel &model, const std::vector<Parameter> &snapshots,
                               const TaylorConfig &cfg, const ReducedBasis &base,
                               double drop_tol = 1e-10);

}  // namespace rbhier

#endif  // RBHIER_TAYLOR_HPP
