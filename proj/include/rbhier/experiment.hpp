// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_EXPERIMENT_HPP
#define RBHIER_EXPERIMENT_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include "rbhier/config.hpp"

namespace rbhier
{

enum ExitCode : int
{
  exit_ok = 0,
  exit_failure = 1,
  exit_saturation = 2,
  exit_scm = 3,
  exit_config = 4
};

struct RunOutcome
{
  int exit_code = exit_ok;
  bool skipped = false;
  std::string message;
};

//
// Offline phase. Files in output_path(cfg):
//
//   config.ini           canonical config
//   truth_train.rbh      u(μ) over the training set
//   greedy_trace.csv     N,mu_1..mu_P,selector,max_value,theta,K_N,t_offline
//   theta_log.csv        N,k,M,theta (weak_hier only)
//   bases.rbh            bases, reduced models and residual data per variant and N
//   theta_<variant>.csv  N,M,Theta,valid
//   scm.rbh, scm_history.csv   when beta_source = scm
//   manifest.json        config hash, version, wall times, artifacts, status
//
// Variants: lagrange_plus<r> for every M rule r (X_M = first N + r greedy columns),
// taylor_K<K> for every Taylor order K, and hier for weak_hier sampling.
// A run whose manifest carries the same config hash is skipped unless `force` is set.
//
RunOutcome run_offline(const ExperimentConfig &cfg, bool force, std::ostream &log);

//
// Online evaluation over the test set. Writes truth_test.rbh, effectivity_<variant>.csv
// (see write_effectivity_header) and the figure files of emit_figures.
//
RunOutcome run_online_eval(const ExperimentConfig &cfg, std::ostream &log);

//
// From every effectivity_<variant>.csv in `dir`:
//   figure_<variant>.dat        "N err std hier", means over the test set per N
//   scatter_<variant>_std.dat   "time eta" of Δ_std
//   scatter_<variant>_hier.dat  "time eta" of the certified Δ_{N,M}
// Means containing a non-finite entry are written as inf.
//
void emit_figures(const std::filesystem::path &dir, std::ostream &log);

// Recomputes the saturation constants of every variant from the offline artifacts and
// prints them as N,M,Theta,valid blocks.
RunOutcome theta_tables(const ExperimentConfig &cfg, std::ostream &out);

// SCM over the training set on its own; writes scm.rbh and scm_history.csv.
RunOutcome scm_study(const ExperimentConfig &cfg, std::ostream &log);

std::string version_string();

}  // namespace rbhier

#endif  // RBHIER_EXPERIMENT_HPP
