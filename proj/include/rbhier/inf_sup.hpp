// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_INF_SUP_HPP
#define RBHIER_INF_SUP_HPP

#include "rbhier/truth_model.hpp"

namespace rbhier
{

//
// Truth stability constants of an operator A with respect to a Gramian G:
//   β = sqrt(λ_min), γ = sqrt(λ_max) of the pencil Aᴴ G⁻¹ A v = λ G v,
// i.e. the extreme singular values of L⁻¹ A L⁻ᴴ with G = L Lᴴ.
//
struct StabilityConstants
{
  double beta = 0.0;
  double gamma = 0.0;
  Vector beta_mode;  // G-normalized minimizer of the inf-sup quotient
};

enum class EigenRoute
{
  automatic,  // dense up to EigenOptions::dense_limit dofs, Lanczos above
  dense,
  iterative
};

struct EigenOptions
{
  int dense_limit = 300;
  double tol = 1e-11;        // relative Ritz residual
  int max_iterations = 800;  // Lanczos steps
  unsigned seed = 7;
};

StabilityConstants stability_constants(const SparseMatrix &op, const SparseMatrix &gram,
                                       EigenRoute route = EigenRoute::automatic,
                                       const EigenOptions &opts = {});

// β and its mode only; gamma is left at 0. The iterative route needs a single inverse
// Lanczos run, which is what the SCM samples use.
StabilityConstants inf_sup_only(const SparseMatrix &op, const SparseMatrix &gram,
                                EigenRoute route = EigenRoute::automatic,
                                const EigenOptions &opts = {});

// β^N(μ), γ^N(μ) with the model's X-Gramian at μ.
StabilityConstants exact_inf_sup(const TruthModel &model, const Parameter &mu,
                                 EigenRoute route = EigenRoute::automatic,
                                 const EigenOptions &opts = {});

// Same pencil with the fixed reference Gramian G(μ_ref).
StabilityConstants reference_inf_sup(const TruthModel &model, const Parameter &mu,
                                     EigenRoute route = EigenRoute::automatic,
                                     const EigenOptions &opts = {});

// Extreme eigenvalues of a Hermitian pencil H v = λ G v. The iterative route widens the
// interval by the Ritz residual so the result encloses the spectrum.
struct PencilExtremes
{
  double lower = 0.0, upper = 0.0;
  Vector lower_mode;
};

PencilExtremes hermitian_pencil_extremes(const SparseMatrix &herm, const SparseMatrix &gram,
                                         EigenRoute route = EigenRoute::automatic,
                                         const EigenOptions &opts = {});

}  // namespace rbhier

#endif  // RBHIER_INF_SUP_HPP
