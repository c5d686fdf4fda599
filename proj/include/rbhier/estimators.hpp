// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_ESTIMATORS_HPP
#define RBHIER_ESTIMATORS_HPP

#include <algorithm>
#include <chrono>
#include <iosfwd>
#include <optional>
#include <vector>
#include "rbhier/reduced_basis.hpp"

namespace rbhier
{

//
// Offline data for the residual dual norm of
//   R(μ) = Σ_q ϑ^f_q(μ) F_q − Σ_q ϑ^a_q(μ) Σ_i c_i A_q ξ_i
// in the reference frame G_ref. With r_x = G_ref⁻¹ x the blocks are
//   ff(q, q') = F_qᴴ r_{F_q'},  fa(q, q'M+i) = F_qᴴ r_{A_q' ξ_i},
//   aa(qM+i, q'M+j) = (A_q ξ_i)ᴴ r_{A_q' ξ_j}.
//
struct ResidualData
{
  int basis_size = 0;
  Matrix ff, fa, aa;
  std::vector<ThetaFunction> theta_a, theta_f, theta_gram;
  Vector sigma_ref;  // σ_r(μ_ref)
};

ResidualData build_residual_data(const TruthModel &model, const ReducedBasis &basis);

// Theta functions are not serialized; load takes them from the truth model.
void save_residual_data(const ResidualData &rd, Container &c, const std::string &prefix);
ResidualData load_residual_data(const Container &c, const std::string &prefix,
                                const TruthModel &model);

// Raw quadratic form ‖R‖²; may be slightly negative from round-off.
double residual_dual_norm_sq_raw(const ResidualData &rd, const Parameter &mu,
                                 const Vector &coeffs);

// ‖R(μ)‖ in the dual of the reference frame, negative round-off clamped to zero.
double residual_dual_norm(const ResidualData &rd, const Parameter &mu, const Vector &coeffs);

// sqrt(max_r σ_r(μ)/σ_r(μ_ref)): converts reference-frame error bounds to ‖·‖_{X(μ)}.
double frame_factor(const ResidualData &rd, const Parameter &mu);

// frame_factor · ‖R‖ / beta_lb with beta_lb a lower bound of the reference-frame inf-sup
// constant. Throws StabilityBoundError if beta_lb ≤ 0.
double delta_std(const ResidualData &rd, const Parameter &mu, const Vector &coeffs,
                 double beta_lb);

// sqrt(δᴴ G_red(μ) δ), δ = pad(coeffs_N) − coeffs_M, with the μ-dependent reduced Gramian.
double delta_hier(const ReducedModel &rm, const Parameter &mu, const Vector &coeffs_n,
                  const Vector &coeffs_m);

// delta / (1 − theta). Throws SaturationError if theta ≥ 1.
double delta_hier_certified(double delta, double theta);

// ‖u − Ξ c‖_{X(μ)}.
double truth_error(const TruthModel &model, const Parameter &mu, const Vector &truth,
                   const ReducedBasis &basis, const Vector &coeffs);

struct EffectivityRecord
{
  int n = 0, m = 0;
  Parameter mu;
  double error = 0.0;
  double delta_std = 0.0;
  double delta_hier = 0.0;
  double delta_hier_cert = 0.0;
  std::optional<double> eta;  // undefined when the error vanishes
  double t_std = -1.0, t_hier = -1.0;  // seconds; negative when not measured
  bool within_bound = true;  // 1 ≤ η ≤ (1+Θ)/(1−Θ) up to slack
};

EffectivityRecord make_effectivity_record(int n, int m, const Parameter &mu, double error,
                                          double delta_std, double delta_hier, double theta,
                                          double rel_slack = 1e-9);

void write_effectivity_header(std::ostream &os, int parameter_dim);
void write_effectivity_row(std::ostream &os, const EffectivityRecord &r);

// Median wall time in seconds of `reps` calls.
template <typename Fn>
double median_seconds(Fn &&fn, int reps = 11)
{
  std::vector<double> t(reps);
  for (int k = 0; k < reps; k++)
  {
    const auto start = std::chrono::steady_clock::now();
    fn();
    t[k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  std::nth_element(t.begin(), t.begin() + reps / 2, t.end());
  return t[reps / 2];
}

}  // namespace rbhier

#endif  // RBHIER_ESTIMATORS_HPP
