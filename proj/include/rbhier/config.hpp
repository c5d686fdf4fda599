// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_CONFIG_HPP
#define RBHIER_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>
#include "rbhier/greedy.hpp"

namespace rbhier
{

enum class Problem
{
  thermal_block,
  helmholtz
};

enum class Sampling
{
  strong,
  weak_std,
  weak_hier
};

enum class ScmModeChoice
{
  automatic,  // coercive for real Hermitian operators, infsup_squared otherwise
  coercive,
  infsup_squared
};

//
// One experiment. The text form is INI with the sections and keys below; lists are
// whitespace separated. Unknown sections or keys are rejected.
//
//   [problem]    name, lower, upper, cells_per_side, elements, degree, source, robin,
//                reference_wavenumber
//   [train]      points_per_dim
//   [test]       size, seed
//   [sampling]   method, n_max, tol, drop_tol, k_max, first_index
//   [estimator]  m_rules, taylor_orders, beta_source, theta_method, initial_guess,
//                exclude_tol, reproduced_tol, theta_tol
//   [scm]        mode, m_alpha, m_plus, tol, k_max, route
//   [output]     directory, timing
//
struct ExperimentConfig
{
  Problem problem = Problem::thermal_block;
  RealVector lower, upper;
  int cells_per_side = 33;
  int elements = 100;
  int degree = 6;
  double source = 1.0;
  double robin = 0.0;
  std::optional<double> reference_wavenumber;  // midpoint of the range when unset

  std::vector<int> train_points{41, 41};
  int test_size = 100;
  std::uint64_t test_seed = 1;

  Sampling sampling = Sampling::strong;
  int n_max = 10;
  double greedy_tol = 0.0;
  double drop_tol = 1e-10;
  int k_max = 4;
  std::size_t first_index = 0;

  std::vector<int> m_rules{1, 2};
  std::vector<int> taylor_orders;
  BetaSource beta_source = BetaSource::exact_eig;
  ThetaMethod theta_method = ThetaMethod::train_ratio;
  InitialGuess initial_guess = InitialGuess::ratio_max;
  double exclude_tol = 1e-12;
  double reproduced_tol = 1e-10;
  double theta_tol = 0.0;

  ScmModeChoice scm_mode = ScmModeChoice::automatic;
  int scm_m_alpha = 30;
  int scm_m_plus = 20;
  double scm_tol = 1e-6;
  int scm_k_max = 3000;
  EigenRoute route = EigenRoute::automatic;

  std::string directory = "run";
  bool timing = false;  // wall-time columns are NA otherwise, keeping reports byte-identical

  bool operator==(const ExperimentConfig &) const = default;
};

// Throws ConfigError on syntax errors, unknown keys, bad values or inconsistent settings.
ExperimentConfig parse_config(std::istream &is);
ExperimentConfig load_config(const std::filesystem::path &file);

// Canonical text: every key in schema order, doubles with 17 significant digits.
std::string serialize(const ExperimentConfig &cfg);

// Hex SHA-256 of the canonical text.
std::string config_hash(const ExperimentConfig &cfg);

// "section.key=value", validated by the same strict parser.
void apply_override(ExperimentConfig &cfg, const std::string &assignment);

void validate(const ExperimentConfig &cfg);

// Output directory: `directory` if absolute, otherwise below $RBHIER_OUTPUT_ROOT (or the
// current directory when the variable is unset).
std::filesystem::path output_path(const ExperimentConfig &cfg);

ParameterDomain parameter_domain(const ExperimentConfig &cfg);
TruthModel build_model(const ExperimentConfig &cfg);
SampleSet training_set(const ExperimentConfig &cfg);
SampleSet test_set(const ExperimentConfig &cfg);
ScmConfig scm_config(const ExperimentConfig &cfg, const TruthModel &model);

std::string to_string(Problem p);
std::string to_string(Sampling s);
std::string to_string(BetaSource b);

}  // namespace rbhier

#endif  // RBHIER_CONFIG_HPP
