// SPDX-License-Identifier: Apache-2.0

#include "rbhier/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace rbhier
{

namespace
{

constexpr double pivot_eps = 1e-11;

// Tableau in canonical form: basic columns are unit vectors, rhs in the last column, and
// `cost` holds the reduced costs with the negated objective value in its last entry.
struct Tableau
{
  RealMatrix T;
  RealVector cost;
  std::vector<int> basis;
  int pivots = 0;

  int cols() const { return static_cast<int>(T.cols()) - 1; }

  void pivot(int row, int col)
  {
    T.row(row) /= T(row, col);
    for (int i = 0; i < T.rows(); i++)
    {
      if (i != row && T(i, col) != 0.0)
      {
        T.row(i) -= T(i, col) * T.row(row);
      }
    }
    if (cost[col] != 0.0)
    {
      cost -= cost[col] * T.row(row).transpose();
    }
    basis[row] = col;
    pivots++;
  }

  // Bland's rule; `allowed` masks columns that may enter.
  void run(const std::vector<bool> &allowed)
  {
    const double scale = std::max(1.0, cost.head(cols()).cwiseAbs().maxCoeff());
    for (;;)
    {
      int enter = -1;
      for (int j = 0; j < cols(); j++)
      {
        if (allowed[j] && cost[j] < -1e-12 * scale)
        {
          enter = j;
          break;
        }
      }
      if (enter < 0)
      {
        return;
      }
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < T.rows(); i++)
      {
        if (T(i, enter) > pivot_eps)
        {
          const double ratio = T(i, cols()) / T(i, enter);
          if (leave < 0 || ratio < best - 1e-14 ||
              (ratio <= best + 1e-14 && basis[i] < basis[leave]))
          {
            best = std::min(best, ratio);
            leave = i;
          }
        }
      }
      if (leave < 0)
      {
        // Cannot happen for a bounded feasible region; treat the column as unusable.
        cost[enter] = 0.0;
        continue;
      }
      pivot(leave, enter);
    }
  }

  void price(const RealVector &c)
  {
    cost = RealVector::Zero(T.cols());
    cost.head(c.size()) = c;
    for (int i = 0; i < T.rows(); i++)
    {
      const double cb = basis[i] < c.size() ? c[basis[i]] : 0.0;
      if (cb != 0.0)
      {
        cost -= cb * T.row(i).transpose();
      }
    }
  }
};

}  // namespace

LpResult solve_box_lp(const BoxLp &lp)
{
  const int n = static_cast<int>(lp.c.size());
  if (lp.A.cols() != n || lp.A.rows() != lp.b.size() || lp.lower.size() != n ||
      lp.upper.size() != n)
  {
    throw PreconditionError("solve_box_lp: inconsistent dimensions");
  }
  for (int j = 0; j < n; j++)
  {
    if (!(lp.lower[j] <= lp.upper[j]) || !std::isfinite(lp.lower[j]) ||
        !std::isfinite(lp.upper[j]))
    {
      throw PreconditionError("solve_box_lp: invalid bounds on variable " + std::to_string(j));
    }
  }

  const RealVector width = lp.upper - lp.lower;
  LpResult res;

  // x = lower + width ∘ y, y ∈ [0, 1]; rows a'y ≥ r normalized to max |coefficient| 1.
  std::vector<RealVector> rows;
  std::vector<double> rhs;
  for (int i = 0; i < lp.A.rows(); i++)
  {
    RealVector a = lp.A.row(i).transpose().cwiseProduct(width);
    double r = lp.b[i] - lp.A.row(i).dot(lp.lower);
    const double s = a.cwiseAbs().maxCoeff();
    if (s == 0.0)
    {
      if (r > 1e-12 * std::max(1.0, std::abs(lp.b[i])))
      {
        return res;
      }
      continue;
    }
    rows.push_back(a / s);
    rhs.push_back(r / s);
  }
  const int m = static_cast<int>(rows.size());

  // Columns: y (n) | t (n) with y + t = 1 | s (m) surplus | artificials.
  std::vector<int> art_row;
  for (int i = 0; i < m; i++)
  {
    if (rhs[i] > 0.0)
    {
      art_row.push_back(i);
    }
  }
  const int na = static_cast<int>(art_row.size());
  const int ncols = 2 * n + m + na;
  Tableau tab;
  tab.T = RealMatrix::Zero(n + m, ncols + 1);
  tab.basis.assign(n + m, -1);
  for (int j = 0; j < n; j++)
  {
    tab.T(j, j) = 1.0;
    tab.T(j, n + j) = 1.0;
    tab.T(j, ncols) = 1.0;
    tab.basis[j] = n + j;
  }
  int next_art = 2 * n + m;
  for (int i = 0; i < m; i++)
  {
    const int r = n + i;
    const double sign = rhs[i] > 0.0 ? 1.0 : -1.0;
    tab.T.row(r).head(n) = sign * rows[i].transpose();
    tab.T(r, 2 * n + i) = -sign;
    tab.T(r, ncols) = sign * rhs[i];
    if (rhs[i] > 0.0)
    {
      tab.T(r, next_art) = 1.0;
      tab.basis[r] = next_art++;
    }
    else
    {
      tab.basis[r] = 2 * n + i;
    }
  }
  std::vector<bool> allowed(ncols, true);
  if (na > 0)
  {
    RealVector c1 = RealVector::Zero(ncols);
    c1.tail(na).setOnes();
    tab.price(c1);
    tab.run(allowed);
    if (-tab.cost[ncols] > 1e-9)
    {
      res.pivots = tab.pivots;
      return res;
    }
    // Drive zero-level artificials out of the basis; rows where that is impossible are
    // redundant and are removed.
    std::vector<int> keep;
    for (int i = 0; i < tab.T.rows(); i++)
    {
      if (tab.basis[i] >= 2 * n + m)
      {
        int col = -1;
        for (int j = 0; j < 2 * n + m; j++)
        {
          if (std::abs(tab.T(i, j)) > 1e-9)
          {
            col = j;
            break;
          }
        }
        if (col < 0)
        {
          continue;
        }
        tab.pivot(i, col);
      }
      keep.push_back(i);
    }
    RealMatrix T2(keep.size(), 2 * n + m + 1);
    std::vector<int> b2;
    for (std::size_t k = 0; k < keep.size(); k++)
    {
      T2.row(k).head(2 * n + m) = tab.T.row(keep[k]).head(2 * n + m);
      T2(k, 2 * n + m) = tab.T(keep[k], ncols);
      b2.push_back(tab.basis[keep[k]]);
    }
    tab.T = std::move(T2);
    tab.basis = std::move(b2);
  }

  const int ncols2 = tab.cols();
  RealVector c2 = RealVector::Zero(ncols2);
  c2.head(n) = lp.c.cwiseProduct(width);
  tab.price(c2);
  tab.run(std::vector<bool>(ncols2, true));

  RealVector y = RealVector::Zero(n);
  for (int i = 0; i < tab.T.rows(); i++)
  {
    if (tab.basis[i] < n)
    {
      y[tab.basis[i]] = tab.T(i, ncols2);
    }
  }
  res.status = LpStatus::optimal;
  res.x = lp.lower + width.cwiseProduct(y.cwiseMax(0.0).cwiseMin(1.0));
  res.objective = lp.c.dot(res.x);
  res.pivots = tab.pivots;
  return res;
}

}  // namespace rbhier
