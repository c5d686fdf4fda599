#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <json.hpp>
#include "rbhier/experiment.hpp"

using namespace rbhier;
namespace fs = std::filesystem;

namespace
{

std::string slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_thermal(const fs::path &dir)
{
  ExperimentConfig c;
  c.cells_per_side = 6;
  c.lower = RealVector::Constant(2, 0.5);
  c.upper = RealVector::Constant(2, 1.0);
  c.train_points = {7, 7};
  c.test_size = 8;
  c.n_max = 4;
  c.m_rules = {1, 2};
  c.taylor_orders = {1};
  c.directory = dir.string();
  return c;
}

fs::path fresh_dir(const std::string &name)
{
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("offline and eval write the documented artifacts")
{
  const auto dir = fresh_dir("rbhier_exp_a");
  const auto cfg = small_thermal(dir);
  std::ostringstream log;
  const auto r = run_offline(cfg, false, log);
  REQUIRE(r.exit_code == exit_ok);
  CHECK_FALSE(r.skipped);
  for (const char *f : {"config.ini", "truth_train.rbh", "greedy_trace.csv", "bases.rbh",
                        "theta_lagrange_plus1.csv", "theta_lagrange_plus2.csv",
                        "theta_taylor_K1.csv", "manifest.json"})
  {
    CHECK(fs::exists(dir / f));
  }
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["config_hash"] == config_hash(cfg));
  CHECK(manifest["complete"] == true);
  CHECK(manifest["artifacts"].size() >= 7);

  REQUIRE(run_online_eval(cfg, log).exit_code == exit_ok);
  const std::string fig = slurp(dir / "figure_lagrange_plus1.dat");
  CHECK(fig.rfind("N err std hier\n", 0) == 0);
  CHECK(slurp(dir / "scatter_taylor_K1_std.dat").rfind("time eta\n", 0) == 0);
  // 4 N values × 8 test points + header.
  const std::string eff = slurp(dir / "effectivity_lagrange_plus1.csv");
  CHECK(std::count(eff.begin(), eff.end(), '\n') == 33);
}

TEST_CASE("identical configs give byte-identical reports")
{
  const auto d1 = fresh_dir("rbhier_exp_b1"), d2 = fresh_dir("rbhier_exp_b2");
  std::ostringstream log;
  auto c1 = small_thermal(d1), c2 = small_thermal(d2);
  REQUIRE(run_offline(c1, false, log).exit_code == 0);
  REQUIRE(run_offline(c2, false, log).exit_code == 0);
  REQUIRE(run_online_eval(c1, log).exit_code == 0);
  REQUIRE(run_online_eval(c2, log).exit_code == 0);
  int compared = 0;
  for (const auto &e : fs::directory_iterator(d1))
  {
    const auto ext = e.path().extension();
    if (ext == ".csv" || ext == ".dat")
    {
      CHECK(slurp(e.path()) == slurp(d2 / e.path().filename()));
      compared++;
    }
  }
  CHECK(compared >= 10);
}

TEST_CASE("offline is idempotent unless forced or the config changes")
{
  const auto dir = fresh_dir("rbhier_exp_c");
  auto cfg = small_thermal(dir);
  std::ostringstream log;
  REQUIRE(run_offline(cfg, false, log).exit_code == 0);
  CHECK(run_offline(cfg, false, log).skipped);
  CHECK_FALSE(run_offline(cfg, true, log).skipped);
  cfg.n_max = 3;
  CHECK_FALSE(run_offline(cfg, false, log).skipped);
  // Eval refuses artifacts of another config.
  auto other = cfg;
  other.test_seed = 9;
  CHECK(run_online_eval(other, log).exit_code == exit_failure);
  CHECK(run_online_eval(cfg, log).exit_code == exit_ok);
}

TEST_CASE("hierarchical sampling writes the theta log and recomputes the same tables")
{
  const auto dir = fresh_dir("rbhier_exp_d");
  ExperimentConfig c;
  c.problem = Problem::helmholtz;
  c.lower = RealVector::Constant(1, 1.0);
  c.upper = RealVector::Constant(1, 5.0);
  c.elements = 10;
  c.degree = 5;
  c.train_points = {30};
  c.test_size = 5;
  c.sampling = Sampling::weak_hier;
  c.n_max = 3;
  c.m_rules = {};
  c.directory = dir.string();
  std::ostringstream log;
  REQUIRE(run_offline(c, false, log).exit_code == exit_ok);
  CHECK(fs::exists(dir / "theta_log.csv"));
  const std::string table = slurp(dir / "theta_hier.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);
  CHECK(table.find(",0\n") == std::string::npos);  // every Θ < 1
  std::ostringstream printed;
  REQUIRE(theta_tables(c, printed).exit_code == exit_ok);
  CHECK(printed.str() == "# hier\n" + table);
}

TEST_CASE("SCM study reports non-convergence through its exit code")
{
  const auto dir = fresh_dir("rbhier_exp_e");
  ExperimentConfig c = small_thermal(dir);
  c.scm_k_max = 1;
  c.scm_tol = 1e-14;
  std::ostringstream log;
  CHECK(scm_study(c, log).exit_code == exit_scm);
  CHECK(fs::exists(dir / "scm_history.csv"));
  c.scm_k_max = 10;
  c.scm_tol = 1e-6;
  CHECK(scm_study(c, log).exit_code == exit_ok);
}
