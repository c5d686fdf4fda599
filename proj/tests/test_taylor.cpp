#include <doctest.h>
#include "rbhier/taylor.hpp"
#include "support.hpp"

using namespace rbhier;
using support::p1;
using support::p2;

namespace
{

// Central difference of u along one coordinate.
Vector central_difference(const TruthModel &m, Parameter mu, int dir, double h)
{
  Parameter plus = mu, minus = mu;
  plus[dir] += h;
  minus[dir] -= h;
  return (truth_solve(m, plus) - truth_solve(m, minus)) / (2.0 * h);
}

}  // namespace

TEST_CASE("first derivative matches central differences at second order")
{
  const auto tb = support::small_thermal(6);
  const Parameter mu = p2(0.4, 0.7);
  for (int dir = 0; dir < 2; dir++)
  {
    TruthSolver solver(tb, mu);
    const Vector u = solver.solve(tb.assemble_rhs(mu));
    const Vector du = taylor_derivatives(tb, solver, dir, 1, u)[0];
    const double e1 = (central_difference(tb, mu, dir, 1e-2) - du).norm();
    const double e2 = (central_difference(tb, mu, dir, 5e-3) - du).norm();
    CHECK(std::log2(e1 / e2) >= 1.9);
    CHECK(e2 <= 1e-3 * du.norm());
  }
}

TEST_CASE("higher derivatives of the Helmholtz solution")
{
  const auto hm = support::small_helmholtz(1, 5, 20, 6);
  const Parameter mu = p1(3.0);
  TruthSolver solver(hm, mu);
  const Vector u = solver.solve(hm.assemble_rhs(mu));
  const auto d = taylor_derivatives(hm, solver, 0, 3, u);
  REQUIRE(d.size() == 3);
  // Second derivative against a difference of first derivatives.
  const double h = 1e-3;
  auto first = [&](double k)
  {
    TruthSolver s(hm, p1(k));
    return taylor_derivatives(hm, s, 0, 1, s.solve(hm.assemble_rhs(p1(k))))[0];
  };
  const Vector fd2 = (first(3.0 + h) - first(3.0 - h)) / (2 * h);
  CHECK((fd2 - d[1]).norm() <= 1e-5 * d[1].norm());
  CHECK_THROWS_AS(taylor_rhs(hm, mu, 0, 2, {u}), PreconditionError);
}

TEST_CASE("Taylor space dimensions")
{
  const auto tb = support::small_thermal(6);
  const std::vector<Parameter> s{p2(0.5, 0.5), p2(0.9, 0.2)};
  auto base = make_basis(tb);
  base.extend_gram_schmidt({truth_solve(tb, s[0]), truth_solve(tb, s[1])}, {});
  const auto space = build_taylor_space(tb, s, {{2}}, base);
  CHECK(space.nominal_m == 2 * (1 + 2 * 2));
  CHECK(space.effective_m <= space.nominal_m);
  CHECK(space.effective_m > 2);
  CHECK(space.basis.orthonormality_defect() <= 1e-10);
  CHECK(space.tags.size() == 8);
  CHECK(space.tags[0].n == 1);
  CHECK(space.tags[0].direction == 1);
  CHECK((space.basis.matrix().leftCols(2) - base.matrix()).norm() == 0.0);
  CHECK_THROWS_AS(build_taylor_space(tb, s, {{1, 2, 3}}, base), PreconditionError);
}
