// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_SCM_HPP
#define RBHIER_SCM_HPP

#include <iosfwd>
#include <vector>
#include "rbhier/container.hpp"
#include "rbhier/inf_sup.hpp"
#include "rbhier/param_space.hpp"

namespace rbhier
{

// β_ref · min_q ϑ_q(μ)/ϑ_q(μ_ref). Requires real positive coefficients and positive
// semidefinite A_q; throws PreconditionError otherwise.
double min_theta_lower_bound(const TruthModel &model, const Parameter &mu,
                             const Parameter &mu_ref, double beta_ref);

enum class ScmMode
{
  // α(μ) = λ_min(A(μ), G_ref); variables y_q = vᴴ A_q v / vᴴ G_ref v.
  coercive,
  // s(μ) = β_ref(μ)² = λ_min(A(μ)ᴴ G_ref⁻¹ A(μ), G_ref); variables are the real and
  // imaginary parts of z_qq' = (A_q v)ᴴ G_ref⁻¹ (A_q' v) / vᴴ G_ref v for q ≤ q'.
  infsup_squared
};

struct ScmConfig
{
  ScmMode mode = ScmMode::coercive;
  int m_alpha = 30;
  int m_plus = 20;
  double tol = 1e-6;  // on the gap 1 − LB²/UB²
  int k_max = 3000;
  EigenRoute route = EigenRoute::automatic;
  EigenOptions eigen;
};

struct ScmHistoryEntry
{
  int k = 0;
  Parameter mu;  // constraint added at step k
  double gap = 0.0;  // max gap over the training set after adding it
};

//
// Offline state of the Successive Constraint Method. All bounds refer to the reference
// frame G_ref; lower_bound/upper_bound return β-scale values (α for the coercive mode).
//
class ScmState
{
public:
  ScmState(ScmConfig cfg, std::vector<ThetaFunction> theta_a, RealVector box_lower,
           RealVector box_upper, std::vector<Parameter> positivity_set);

  const ScmConfig &config() const { return cfg_; }
  int num_constraints() const { return static_cast<int>(c_mu_.size()); }
  int num_variables() const { return static_cast<int>(box_lo_.size()); }
  const std::vector<Parameter> &constraint_parameters() const { return c_mu_; }
  const std::vector<double> &constraint_values() const { return c_val_; }
  const std::vector<ScmHistoryEntry> &history() const { return history_; }
  bool converged() const { return converged_; }
  const RealVector &box_lower() const { return box_lo_; }
  const RealVector &box_upper() const { return box_hi_; }

  // Objective coefficients of the LP variables at μ.
  RealVector coefficients(const Parameter &mu) const;

  // Bounds of the stability quantity (α, or s = β²) before the square root.
  double stability_lower(const Parameter &mu) const;
  double stability_upper(const Parameter &mu) const;

  double lower_bound(const Parameter &mu) const;
  double upper_bound(const Parameter &mu) const;
  double gap(const Parameter &mu) const;

  void add_constraint(const Parameter &mu, double exact, RealVector y);
  void record(ScmHistoryEntry e) { history_.push_back(std::move(e)); }
  void set_converged(bool c) { converged_ = c; }

  void save(Container &c, const std::string &prefix) const;
  static ScmState load(const Container &c, const std::string &prefix,
                       const TruthModel &model);

private:
  long constraint_index(const Parameter &mu) const;
  std::vector<std::size_t> nearest(const std::vector<Parameter> &pts, const Parameter &mu,
                                   int count) const;

  ScmConfig cfg_;
  std::vector<ThetaFunction> theta_a_;
  RealVector box_lo_, box_hi_;
  std::vector<Parameter> positivity_;
  std::vector<Parameter> c_mu_;
  std::vector<double> c_val_;
  std::vector<RealVector> c_y_;
  std::vector<ScmHistoryEntry> history_;
  bool converged_ = false;
};

// Exact stability value at μ and its LP-variable vector, in the reference frame.
struct ScmSample
{
  double value = 0.0;  // α or β²
  RealVector y;
};
ScmSample scm_exact_sample(const TruthModel &model, const Parameter &mu, const ScmConfig &cfg);

// Greedy constraint selection over `train`, starting at train[0]. Stops when the largest gap
// is ≤ tol (converged) or after k_max constraints (not converged; no exception).
ScmState scm_offline(const TruthModel &model, const SampleSet &train, const ScmConfig &cfg);

double scm_lower_bound(const ScmState &state, const Parameter &mu);
double scm_upper_bound(const ScmState &state, const Parameter &mu);

// Reference-frame β bounds mapped to the inf-sup constant in ‖·‖_{X(μ)}:
// β_μ ≥ β_ref / c_hi and β_μ ≤ β_ref / c_lo.
double to_parameter_frame_lower(const TruthModel &model, const Parameter &mu, double beta_ref);
double to_parameter_frame_upper(const TruthModel &model, const Parameter &mu, double beta_ref);

// CSV: K,mu_1..mu_P,gap
void write_scm_history(std::ostream &os, const ScmState &state, int parameter_dim);

}  // namespace rbhier

#endif  // RBHIER_SCM_HPP
