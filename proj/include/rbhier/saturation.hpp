// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_SATURATION_HPP
#define RBHIER_SATURATION_HPP

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>
#include "rbhier/estimators.hpp"
#include "rbhier/param_space.hpp"

namespace rbhier
{

enum class ThetaMethod
{
  train_ratio,
  dinkelbach
};

enum class InitialGuess
{
  ratio_max,          // max ‖R_M‖/‖R_N‖ over the subset
  argmax_then_error   // error ratio f/g at the argmax of ‖R_M‖/‖R_N‖
};

//
// Saturation constant Θ_{N,M} = max_i Θ_i over the subsets of a partition, with
// f(μ) = ‖u − u_M‖ and g(μ) = ‖u − u_N‖.
//
struct SaturationResult
{
  double theta = 0.0;
  std::vector<double> per_subset;
  std::vector<std::vector<double>> iterates;  // q_0, q_1, ... per subset
  std::vector<std::size_t> argmax;            // index into the evaluated set, per subset
  bool valid = false;                         // Θ < 1
  ThetaMethod method = ThetaMethod::train_ratio;
  // Per-point errors of the evaluated set (filled by compute_theta).
  std::vector<double> f, g;
  std::vector<std::size_t> excluded;
};

// Brute-force max of f/g over points with g > tol·max g. Throws EmptyPartitionError if no
// point survives.
SaturationResult theta_train(std::span<const double> f, std::span<const double> g,
                             double tol = 1e-12);

struct DinkelbachResult
{
  double theta = 0.0;
  double final_value = 0.0;  // F(Θ)
  std::vector<double> iterates;
  std::size_t argmax = 0;
  int iterations = 0;  // number of updates q_k → q_{k+1}
};

// Dinkelbach iteration q_{k+1} = f(μ*_k)/g(μ*_k), μ*_k = argmax f − q_k g (lowest index on
// ties). On a finite set it stops at the exact maximum ratio. tol ≤ 0 selects
// 1e-10·max f. Requires g > 0 everywhere.
DinkelbachResult dinkelbach_theta(std::span<const double> f, std::span<const double> g,
                                  double q0, double tol = 0.0);

struct InitialGuessResult
{
  double q0 = 0.0;
  std::size_t argmax = 0;  // argmax of the residual ratio
};

// error_ratio(i) = f_i/g_i; only called by argmax_then_error.
InitialGuessResult theta_initial_guess(std::span<const double> residual_m,
                                       std::span<const double> residual_n, InitialGuess variant,
                                       const std::function<double(std::size_t)> &error_ratio);

struct ThetaOptions
{
  ThetaMethod method = ThetaMethod::train_ratio;
  InitialGuess guess = InitialGuess::ratio_max;
  double exclude_tol = 1e-12;
  double tol = 0.0;  // Dinkelbach tolerance; ≤ 0 selects 1e-10·max f
  // Index groups for L > 1; empty means a single subset.
  std::vector<std::vector<std::size_t>> groups;
  // Snapshot parameters of X_N in the evaluated set. g vanishes there by construction, so
  // they are excluded even when round-off leaves g just above exclude_tol·max g.
  std::vector<std::size_t> snapshots;
  // Points reproduced to solver precision, g ≤ reproduced_tol·‖u(μ)‖, are excluded as well
  // (e.g. parameters whose solution is a multiple of a snapshot). 0 disables the filter.
  double reproduced_tol = 1e-10;
};

//
// Algorithm for Θ_{N,M}: X_N and X_M are the prefixes n < m of `basis` (with reduced model
// `rm` of size ≥ m); `truth` holds u(μ) for every point of `set`. `rd` supplies residual
// norms for the Dinkelbach initial guess and may be null (q0 = 0).
//
SaturationResult compute_theta(const TruthModel &model, const SampleSet &set,
                               const std::vector<Vector> &truth, const ReducedBasis &basis,
                               const ReducedModel &rm, int n, int m, const ThetaOptions &opts,
                               const ResidualData *rd = nullptr);

// CSV rows "N,M,Theta,valid".
void write_theta_header(std::ostream &os);
void write_theta_row(std::ostream &os, int n, int m, double theta, bool valid);

}  // namespace rbhier

#endif  // RBHIER_SATURATION_HPP
