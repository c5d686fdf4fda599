#include <doctest.h>
#include <functional>
#include <random>
#include "rbhier/lp.hpp"

using namespace rbhier;

namespace
{

// Minimum over all vertices: every choice of n active constraints among the rows and the
// box faces, solved and filtered for feasibility.
double vertex_minimum(const BoxLp &lp)
{
  const int n = static_cast<int>(lp.c.size()), m = static_cast<int>(lp.b.size());
  const int total = m + 2 * n;
  RealMatrix rows(total, n);
  RealVector rhs(total);
  rows.topRows(m) = lp.A;
  rhs.head(m) = lp.b;
  for (int j = 0; j < n; j++)
  {
    rows.row(m + j) = RealVector::Unit(n, j).transpose();
    rhs[m + j] = lp.lower[j];
    rows.row(m + n + j) = RealVector::Unit(n, j).transpose();
    rhs[m + n + j] = lp.upper[j];
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth)
  {
    if (depth == n)
    {
      RealMatrix S(n, n);
      RealVector t(n);
      for (int k = 0; k < n; k++)
      {
        S.row(k) = rows.row(pick[k]);
        t[k] = rhs[pick[k]];
      }
      Eigen::FullPivLU<RealMatrix> lu(S);
      if (lu.rank() < n)
      {
        return;
      }
      const RealVector x = lu.solve(t);
      if ((lp.A * x - lp.b).minCoeff() < -1e-9 || (x - lp.lower).minCoeff() < -1e-9 ||
          (lp.upper - x).minCoeff() < -1e-9)
      {
        return;
      }
      best = std::min(best, lp.c.dot(x));
      return;
    }
    for (int i = start; i < total; i++)
    {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("box LP optimum equals vertex enumeration")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; trial++)
  {
    const int n = 2 + trial % 3, m = 1 + trial % 5;
    BoxLp lp;
    lp.c = RealVector::NullaryExpr(n, [&] { return u(rng); });
    lp.A = RealMatrix::NullaryExpr(m, n, [&] { return u(rng); });
    lp.lower = RealVector::NullaryExpr(n, [&] { return -1.0 - u(rng); });
    lp.upper = lp.lower + RealVector::NullaryExpr(n, [&] { return 0.5 + std::abs(u(rng)); });
    // A feasible interior point keeps the problem feasible.
    const RealVector x0 = 0.5 * (lp.lower + lp.upper);
    lp.b = lp.A * x0 - RealVector::NullaryExpr(m, [&] { return 0.3 * std::abs(u(rng)); });
    const auto res = solve_box_lp(lp);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.objective == doctest::Approx(vertex_minimum(lp)).epsilon(1e-9));
    CHECK((lp.A * res.x - lp.b).minCoeff() >= -1e-9);
  }
}

TEST_CASE("infeasible LP is reported")
{
  BoxLp lp;
  lp.c = RealVector::Ones(2);
  lp.A = RealMatrix::Ones(1, 2);
  lp.b = RealVector::Constant(1, 5.0);
  lp.lower = RealVector::Zero(2);
  lp.upper = RealVector::Ones(2);
  CHECK(solve_box_lp(lp).status == LpStatus::infeasible);
}

TEST_CASE("degenerate rows and redundant constraints")
{
  BoxLp lp;
  lp.c = RealVector(2);
  lp.c << 1.0, 1.0;
  lp.A = RealMatrix(3, 2);
  lp.A << 1, 1, 1, 1, 2, 2;
  lp.b = RealVector(3);
  lp.b << 1, 1, 2;
  lp.lower = RealVector::Zero(2);
  lp.upper = RealVector::Ones(2);
  const auto res = solve_box_lp(lp);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective == doctest::Approx(1.0));
}
