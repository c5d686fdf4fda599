// SPDX-License-Identifier: Apache-2.0
//
// rbhier: offline/online experiment driver.
//
//   rbhier offline   --config FILE [--set section.key=value ...] [--force]
//   rbhier eval      --config FILE [--set ...]
//   rbhier theta     --config FILE [--set ...]
//   rbhier scm-study --config FILE [--set ...]
//   rbhier scatter   --config FILE [--set ...] | --dir DIR
//
// Exit codes: 0 success, 1 other error, 2 saturation failure, 3 SCM non-convergence,
// 4 config error. Relative output directories are placed below $RBHIER_OUTPUT_ROOT.
//

#include <iostream>
#include <CLI11.hpp>
#include "rbhier/experiment.hpp"

namespace
{

rbhier::ExperimentConfig make_config(const std::string &file,
                                     const std::vector<std::string> &overrides)
{
  rbhier::ExperimentConfig cfg = file.empty() ? rbhier::ExperimentConfig{} : rbhier::load_config(file);
  for (const auto &o : overrides)
  {
    rbhier::apply_override(cfg, o);
  }
  rbhier::validate(cfg);
  return cfg;
}

int report(const rbhier::RunOutcome &r)
{
  if (!r.message.empty())
  {
    std::cerr << "rbhier: " << r.message << '\n';
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Reduced basis experiments with hierarchical error estimation"};
  app.set_version_flag("--version", rbhier::version_string());
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> overrides;
  bool force = false;
  std::string scatter_dir;

  auto add_config = [&](CLI::App *sub)
  {
    sub->add_option("-c,--config", config_file, "experiment config (INI)");
    sub->add_option("-s,--set", overrides, "override, e.g. sampling.n_max=8")
      ->take_all();
  };

  auto *offline = app.add_subcommand("offline", "greedy bases, saturation constants, SCM");
  add_config(offline);
  offline->add_flag("-f,--force", force, "recompute even if the artifacts are current");
  auto *eval = app.add_subcommand("eval", "online evaluation over the test set");
  add_config(eval);
  auto *theta = app.add_subcommand("theta", "recompute and print the saturation tables");
  add_config(theta);
  auto *scm = app.add_subcommand("scm-study", "SCM constraint greedy and gap history");
  add_config(scm);
  auto *scatter = app.add_subcommand("scatter", "figure and scatter files from effectivity CSVs");
  add_config(scatter);
  scatter->add_option("-d,--dir", scatter_dir, "run directory (instead of a config)");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (scatter->parsed() && !scatter_dir.empty())
    {
      rbhier::emit_figures(scatter_dir, std::cerr);
      return rbhier::exit_ok;
    }
    const auto cfg = make_config(config_file, overrides);
    if (offline->parsed())
    {
      return report(rbhier::run_offline(cfg, force, std::cerr));
    }
    if (eval->parsed())
    {
      return report(rbhier::run_online_eval(cfg, std::cerr));
    }
    if (theta->parsed())
    {
      return report(rbhier::theta_tables(cfg, std::cout));
    }
    if (scm->parsed())
    {
      return report(rbhier::scm_study(cfg, std::cerr));
    }
    rbhier::emit_figures(rbhier::output_path(cfg), std::cerr);
    return rbhier::exit_ok;
  }
  catch (const rbhier::ConfigError &e)
  {
    std::cerr << "rbhier: config error: " << e.what() << '\n';
    return rbhier::exit_config;
  }
  catch (const rbhier::SaturationError &e)
  {
    std::cerr << "rbhier: " << e.what() << '\n';
    return rbhier::exit_saturation;
  }
  catch (const std::exception &e)
  {
    std::cerr << "rbhier: " << e.what() << '\n';
    return rbhier::exit_failure;
  }
}
