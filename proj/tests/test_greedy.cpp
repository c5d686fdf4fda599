#include <doctest.h>
#include <filesystem>
#include "rbhier/greedy.hpp"
#include "support.hpp"

using namespace rbhier;
using support::p1;
using support::p2;

TEST_CASE("strong greedy decays and reproduces its snapshots")
{
  const auto tb = support::small_thermal(6);
  ParameterDomain box(RealVector::Constant(2, 0.5), RealVector::Constant(2, 1.0));
  const std::vector<int> n{6, 6};
  const auto train = tensor_grid(box, n);
  const TruthCache truth(tb, train);
  GreedyOptions opts;
  opts.n_max = 6;
  const auto res = strong_greedy(tb, train, truth, opts);
  REQUIRE(res.trace.records.size() == 6);
  CHECK(res.trace.records.back().max_value < 1e-2 * res.trace.records.front().max_value);
  const auto rm = project(tb, res.basis);
  for (std::size_t k = 0; k < res.selected.size(); k++)
  {
    const std::size_t i = res.selected[k];
    const Vector c = rb_solve(rm, train[i], res.basis.size());
    CHECK(truth_error(tb, train[i], truth[i], res.basis, c) <= 1e-9 * tb.norm(truth[i], train[i]));
  }
  // Selections are distinct.
  std::vector<std::size_t> sorted = res.selected;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("weak greedy with exact and SCM stability bounds")
{
  const auto tb = support::small_thermal(6);
  ParameterDomain box(RealVector::Constant(2, 0.1), RealVector::Constant(2, 1.0));
  const std::vector<int> n{5, 5};
  const auto train = tensor_grid(box, n);
  GreedyOptions opts;
  opts.n_max = 4;
  const auto exact = weak_greedy_std(tb, train, exact_beta_provider(tb, train), opts, "exact");
  const auto scm_state = scm_offline(tb, train, {});
  const auto scm = weak_greedy_std(tb, train, scm_beta_provider(scm_state), opts, "scm");
  const auto mt = weak_greedy_std(tb, train, min_theta_beta_provider(tb), opts, "min_theta");
  CHECK(exact.trace.selector_name == "weak_std_exact");
  CHECK(exact.selected.size() == 4);
  CHECK(scm.selected.size() == 4);
  CHECK(mt.selected.size() == 4);
  // The estimator bounds the error at every training point.
  const TruthCache truth(tb, train);
  const auto rm = project(tb, exact.basis);
  const auto rd = build_residual_data(tb, exact.basis);
  const auto beta = exact_beta_provider(tb, train);
  for (std::size_t i = 0; i < train.size(); i++)
  {
    const Vector c = rb_solve(rm, train[i], 4);
    // The offline/online residual norm carries a round-off floor of about sqrt(eps)‖u‖.
    const double floor = 1e-7 * tb.norm(truth[i], train[i]);
    CHECK(truth_error(tb, train[i], truth[i], exact.basis, c) <=
          delta_std(rd, train[i], c, beta(i, train[i])) * (1 + 1e-8) + floor);
  }
}

TEST_CASE("hierarchical greedy certifies its saturation constant")
{
  const auto hm = support::small_helmholtz(1, 5, 10, 5);
  ParameterDomain box(RealVector::Constant(1, 1.0), RealVector::Constant(1, 5.0));
  const std::vector<int> n{30};
  const auto train = tensor_grid(box, n);
  const TruthCache truth(hm, train);
  HierGreedyOptions opts;
  opts.n_max = 3;
  opts.k_max = 4;
  const auto res = weak_greedy_hier(hm, train, truth, opts);
  CHECK_FALSE(res.saturation_failed);
  REQUIRE_FALSE(res.trace.records.empty());
  for (const auto &r : res.trace.records)
  {
    CHECK(r.theta < 1.0);
    CHECK(r.k_n >= 1);
    CHECK(r.k_n <= 4);
    CHECK(r.m > r.n);
  }
  CHECK_FALSE(res.trace.theta_log.empty());
  CHECK((res.xm.matrix().leftCols(res.xn.size()) - res.xn.matrix()).norm() == 0.0);
}

TEST_CASE("Lagrange pairs are prefixes")
{
  const auto tb = support::small_thermal(6);
  ParameterDomain box(RealVector::Constant(2, 0.5), RealVector::Constant(2, 1.0));
  const std::vector<int> n{4, 4};
  const auto train = tensor_grid(box, n);
  const TruthCache truth(tb, train);
  GreedyOptions opts;
  opts.n_max = 5;
  const auto res = strong_greedy(tb, train, truth, opts);
  const auto pair = build_lagrange_pair(res.basis, 2, MRule::plus2);
  CHECK(pair.xn.size() == 2);
  CHECK(pair.xm.size() == 4);
  CHECK_THROWS_AS(build_lagrange_pair(res.basis, 4, MRule::plus3), PreconditionError);
}

TEST_CASE("truth cache on disk")
{
  const auto tb = support::small_thermal(3);
  ParameterDomain box(RealVector::Constant(2, 0.5), RealVector::Constant(2, 1.0));
  const std::vector<int> n{2, 2};
  const auto train = tensor_grid(box, n);
  const auto file = std::filesystem::temp_directory_path() / "rbhier_truth_cache_test.rbh";
  std::filesystem::remove(file);
  const auto a = TruthCache::load_or_compute(tb, train, file);
  CHECK(std::filesystem::exists(file));
  const auto b = TruthCache::load_or_compute(tb, train, file);
  REQUIRE(b.size() == 4);
  for (std::size_t i = 0; i < 4; i++)
  {
    CHECK(a[i] == b[i]);
  }
  std::filesystem::remove(file);
}

TEST_CASE("greedy trace csv")
{
  GreedyTrace t;
  GreedyRecord r;
  r.n = 1;
  r.mu = p2(0.5, 1.0);
  r.max_value = 0.5;
  t.records.push_back(r);
  std::ostringstream os;
  write_greedy_trace(os, t, 2, false);
  CHECK(os.str().rfind("N,mu_1,mu_2,selector,max_value,theta,K_N,t_offline\n", 0) == 0);
  CHECK(os.str().find(",NA\n") != std::string::npos);
}
