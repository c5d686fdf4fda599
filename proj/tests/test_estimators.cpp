#include <doctest.h>
#include "rbhier/estimators.hpp"
#include "rbhier/inf_sup.hpp"
#include "support.hpp"

using namespace rbhier;
using support::p1;
using support::p2;

namespace
{

ReducedBasis lagrange_basis(const TruthModel &m, const std::vector<Parameter> &mus)
{
  auto b = make_basis(m);
  std::vector<Vector> s;
  for (const auto &mu : mus)
  {
    s.push_back(truth_solve(m, mu));
  }
  b.extend_gram_schmidt(s, {});
  return b;
}

}  // namespace

TEST_CASE("residual dual norm matches a dense Riesz solve")
{
  const auto tb = support::small_thermal(6);
  const auto basis = lagrange_basis(tb, {p2(0.5, 0.5), p2(1, 0.3), p2(0.2, 0.9)});
  const auto rm = project(tb, basis);
  const auto rd = build_residual_data(tb, basis);
  for (const auto &mu : {p2(0.33, 0.71), p2(0.9, 0.1)})
  {
    for (int n = 1; n <= 3; n++)
    {
      const Vector c = rb_solve(rm, mu, n);
      const Vector r = tb.assemble_rhs(mu) - tb.assemble_operator(mu) * reconstruct(basis, c);
      const double ref = support::dense_dual_norm(tb.reference_gram(), r);
      CHECK(residual_dual_norm(rd, mu, c) == doctest::Approx(ref).epsilon(1e-7));
    }
  }
}

TEST_CASE("Helmholtz residual is measured in the reference frame")
{
  const auto hm = support::small_helmholtz(90, 100);
  const auto basis = lagrange_basis(hm, {p1(90), p1(95), p1(100)});
  const auto rm = project(hm, basis);
  const auto rd = build_residual_data(hm, basis);
  const Parameter mu = p1(92.5);
  const Vector c = rb_solve(rm, mu, 2);
  const Vector r = hm.assemble_rhs(mu) - hm.assemble_operator(mu) * reconstruct(basis, c);
  const double ref = support::dense_dual_norm(hm.reference_gram(), r);
  CHECK(residual_dual_norm(rd, mu, c) == doctest::Approx(ref).epsilon(1e-6));
  const auto gb = hm.gram_bounds(mu);
  CHECK(frame_factor(rd, mu) == doctest::Approx(std::sqrt(gb.upper)));
  CHECK(delta_std(rd, mu, c, 2.0) ==
        doctest::Approx(frame_factor(rd, mu) * residual_dual_norm(rd, mu, c) / 2.0));
  CHECK_THROWS_AS(delta_std(rd, mu, c, 0.0), StabilityBoundError);
}

TEST_CASE("hierarchical estimator equals the truth-space distance")
{
  const auto hm = support::small_helmholtz(90, 100);
  const auto basis = lagrange_basis(hm, {p1(90), p1(93), p1(96), p1(100)});
  const auto rm = project(hm, basis);
  for (double k : {91.0, 94.5, 99.0})
  {
    const Parameter mu = p1(k);
    const Vector cn = rb_solve(rm, mu, 2), cm = rb_solve(rm, mu, 4);
    const Vector d = reconstruct(basis, cm) - reconstruct(basis, cn);
    const double ref = support::dense_norm(hm.gram(mu), d);
    CHECK(delta_hier(rm, mu, cn, cm) == doctest::Approx(ref).epsilon(1e-10));
  }
  CHECK(delta_hier_certified(1.0, 0.5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(delta_hier_certified(1.0, 1.0), SaturationError);
}

TEST_CASE("standard estimator bounds the error with exact constants")
{
  const auto tb = support::small_thermal(6);
  const auto basis = lagrange_basis(tb, {p2(0.5, 0.5), p2(1, 0.3)});
  const auto rm = project(tb, basis);
  const auto rd = build_residual_data(tb, basis);
  const Parameter mu = p2(0.2, 0.8);
  const Vector c = rb_solve(rm, mu, 2);
  const auto s = exact_inf_sup(tb, mu, EigenRoute::dense);
  const double err = truth_error(tb, mu, truth_solve(tb, mu), basis, c);
  const double res = residual_dual_norm(rd, mu, c);
  CHECK(res / s.gamma <= err * (1 + 1e-8));
  CHECK(err <= delta_std(rd, mu, c, s.beta) * (1 + 1e-8));
}

TEST_CASE("effectivity record flags and csv")
{
  const auto r = make_effectivity_record(2, 3, p2(0.1, 0.2), 1.0, 3.0, 1.2, 0.25);
  REQUIRE(r.eta.has_value());
  CHECK(*r.eta == doctest::Approx(1.6));
  CHECK(r.within_bound);
  const auto zero = make_effectivity_record(2, 3, p2(0.1, 0.2), 0.0, 0.0, 0.0, 0.25);
  CHECK_FALSE(zero.eta.has_value());
  std::ostringstream os;
  write_effectivity_header(os, 2);
  write_effectivity_row(os, r);
  const std::string s = os.str();
  CHECK(s.rfind("N,M,mu_1,mu_2,err,delta_std,delta_hier,delta_hier_cert,eta,t_std,t_hier\n", 0) == 0);
  CHECK(s.find("NA,NA") != std::string::npos);
}
