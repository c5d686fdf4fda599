// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_GREEDY_HPP
#define RBHIER_GREEDY_HPP

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>
#include "rbhier/saturation.hpp"
#include "rbhier/scm.hpp"
#include "rbhier/taylor.hpp"

namespace rbhier
{

//
// Truth solutions u(μ) over a sample set, computed once. `load_or_compute` keeps a copy in
// a container file named by the caller (typically a hash of model and set).
//
class TruthCache
{
public:
  TruthCache(const TruthModel &model, const SampleSet &set);
  explicit TruthCache(std::vector<Vector> solutions) : u_(std::move(solutions)) {}

  static TruthCache load_or_compute(const TruthModel &model, const SampleSet &set,
                                    const std::filesystem::path &file);

  std::size_t size() const { return u_.size(); }
  const Vector &operator[](std::size_t i) const { return u_[i]; }
  const std::vector<Vector> &solutions() const { return u_; }

private:
  std::vector<Vector> u_;
};

struct GreedyRecord
{
  int n = 0;
  Parameter mu;  // parameter added to obtain X_N
  double selector = std::numeric_limits<double>::quiet_NaN();  // its selector value
  double max_value = 0.0;  // max over train of the selector with the N-dimensional space
  double theta = std::numeric_limits<double>::quiet_NaN();
  int k_n = -1;
  int m = 0;  // dimension of X_M (hierarchical runs)
  double t_offline = 0.0;  // cumulative seconds
};

struct GreedyTrace
{
  std::string selector_name;
  std::vector<GreedyRecord> records;
  std::string stop_reason;
  // (N, k, M, Θ) for every inner Taylor round of the hierarchical greedy.
  struct ThetaLog
  {
    int n, k, m;
    double theta;
  };
  std::vector<ThetaLog> theta_log;
};

// CSV: N,mu_1..mu_P,selector,max_value,theta,K_N,t_offline. Times are written as NA when
// `with_timing` is false.
void write_greedy_trace(std::ostream &os, const GreedyTrace &trace, int parameter_dim,
                        bool with_timing);

struct GreedyOptions
{
  int n_max = 10;
  double tol = 0.0;
  double drop_tol = 1e-10;
  std::size_t first_index = 0;
};

struct GreedyResult
{
  ReducedBasis basis;
  GreedyTrace trace;
  std::vector<std::size_t> selected;  // training-set indices in selection order
};

// Selector: ‖u(μ) − u_N(μ)‖_{X(μ)} over the training set.
GreedyResult strong_greedy(const TruthModel &model, const SampleSet &train,
                           const TruthCache &truth, const GreedyOptions &opts);

// Lower bound of the reference-frame inf-sup constant at train[index].
using BetaProvider = std::function<double(std::size_t index, const Parameter &mu)>;

enum class BetaSource
{
  exact_eig,
  scm,
  min_theta
};

BetaProvider exact_beta_provider(const TruthModel &model, const SampleSet &train);
BetaProvider scm_beta_provider(const ScmState &state);
BetaProvider min_theta_beta_provider(const TruthModel &model);

// Selector: Δ_N^Std(μ).
GreedyResult weak_greedy_std(const TruthModel &model, const SampleSet &train,
                             const BetaProvider &beta, const GreedyOptions &opts,
                             const std::string &source_name = "std");

struct HierGreedyOptions : GreedyOptions
{
  int k_max = 4;
  double exclude_tol = 1e-12;
};

struct HierGreedyResult
{
  ReducedBasis xn;  // Lagrange basis X_N
  ReducedBasis xm;  // X_M with X_N as prefix
  double theta = 0.0;
  bool saturation_failed = false;
  GreedyTrace trace;
  std::vector<std::size_t> selected;
  std::vector<int> orders;  // K_n per snapshot parameter
};

// Weak greedy with Δ_{N,M} and Taylor enrichment at each new snapshot parameter. The Taylor
// snapshots of all earlier parameters are kept, so M = Σ_n (1 + K_n P) before POD drops.
// When Θ ≥ 1 persists up to k_max the run stops with saturation_failed set.
HierGreedyResult weak_greedy_hier(const TruthModel &model, const SampleSet &train,
                                  const TruthCache &truth, const HierGreedyOptions &opts);

// Greedy on Δ_{N,N+1} with Lagrange snapshots only, starting from train[first_index] and
// train[second_index]. Throws GreedyError when a snapshot parameter is selected again.
GreedyResult naive_lagrange_greedy(const TruthModel &model, const SampleSet &train,
                                   const GreedyOptions &opts, std::size_t second_index);

enum class MRule
{
  plus1 = 1,
  plus2 = 2,
  plus3 = 3
};

struct LagrangePair
{
  ReducedBasis xn, xm;
};

// Prefixes N and N + rule of a greedy-ordered basis.
LagrangePair build_lagrange_pair(const ReducedBasis &greedy_basis, int n, MRule rule);

}  // namespace rbhier

#endif  // RBHIER_GREEDY_HPP
