// SPDX-License-Identifier: Apache-2.0

#include "rbhier/saturation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace rbhier
{

SaturationResult theta_train(std::span<const double> f, std::span<const double> g, double tol)
{
  if (f.size() != g.size())
  {
    throw PreconditionError("theta_train: f and g are not aligned");
  }
  const double gmax = g.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
  SaturationResult res;
  res.method = ThetaMethod::train_ratio;
  bool any = false;
  std::size_t arg = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); i++)
  {
    if (!(g[i] > tol * gmax) || g[i] <= 0.0)
    {
      res.excluded.push_back(i);
      continue;
    }
    const double r = f[i] / g[i];
    if (!any || r > best)
    {
      best = r;
      arg = i;
      any = true;
    }
  }
  if (!any)
  {
    throw EmptyPartitionError("theta_train: every point has a vanishing denominator");
  }
  res.theta = best;
  res.per_subset = {best};
  res.iterates = {{best}};
  res.argmax = {arg};
  res.valid = best < 1.0;
  return res;
}

DinkelbachResult dinkelbach_theta(std::span<const double> f, std::span<const double> g,
                                  double q0, double tol)
{
  if (f.size() != g.size() || f.empty())
  {
    throw PreconditionError("dinkelbach_theta: f and g must be aligned and nonempty");
  }
  for (double v : g)
  {
    if (!(v > 0.0))
    {
      throw PreconditionError("dinkelbach_theta: g must be positive on the subset");
    }
  }
  if (!(tol > 0.0))
  {
    tol = 1e-10 * std::max(*std::max_element(f.begin(), f.end()), 1e-300);
  }

  DinkelbachResult res;
  double q = q0;
  res.iterates.push_back(q);
  const int cap = static_cast<int>(f.size()) + 2;
  for (int k = 0; k <= cap; k++)
  {
    double F = -std::numeric_limits<double>::infinity();
    std::size_t j = 0;
    for (std::size_t i = 0; i < f.size(); i++)
    {
      const double v = f[i] - q * g[i];
      if (v > F)
      {
        F = v;
        j = i;
      }
    }
    const double r = f[j] / g[j];
    // From k ≥ 1 on, q is itself a ratio, so F(q) ≥ 0; an argmax whose ratio does not
    // exceed q means no ratio does, i.e. q is the maximum.
    if (k >= 1 && std::abs(F) < tol && r <= q)
    {
      res.theta = q;
      res.final_value = F;
      res.argmax = j;
      res.iterations = k;
      return res;
    }
    q = r;
    res.iterates.push_back(q);
    res.argmax = j;
  }
  throw Error("dinkelbach_theta: no convergence within the finite-set bound");
}

InitialGuessResult theta_initial_guess(std::span<const double> residual_m,
                                       std::span<const double> residual_n, InitialGuess variant,
                                       const std::function<double(std::size_t)> &error_ratio)
{
  if (residual_m.size() != residual_n.size() || residual_m.empty())
  {
    throw PreconditionError("theta_initial_guess: residual norms must be aligned and nonempty");
  }
  InitialGuessResult out;
  double best = -1.0;
  for (std::size_t i = 0; i < residual_m.size(); i++)
  {
    if (!(residual_n[i] > 0.0))
    {
      continue;
    }
    const double r = residual_m[i] / residual_n[i];
    if (r > best)
    {
      best = r;
      out.argmax = i;
    }
  }
  if (best < 0.0)
  {
    throw PreconditionError("theta_initial_guess: every residual norm of the N-model vanishes");
  }
  out.q0 = variant == InitialGuess::ratio_max ? best : error_ratio(out.argmax);
  return out;
}

SaturationResult compute_theta(const TruthModel &model, const SampleSet &set,
                               const std::vector<Vector> &truth, const ReducedBasis &basis,
                               const ReducedModel &rm, int n, int m, const ThetaOptions &opts,
                               const ResidualData *rd)
{
  if (!(0 < n && n < m && m <= rm.size() && m <= basis.size()))
  {
    throw PreconditionError("compute_theta: need 0 < N < M ≤ basis size");
  }
  if (truth.size() != set.size())
  {
    throw PreconditionError("compute_theta: truth solutions do not match the sample set");
  }
  std::vector<double> f(set.size()), g(set.size()), rn, rmv;
  for (std::size_t i = 0; i < set.size(); i++)
  {
    const auto &mu = set[i];
    const Vector cn = rb_solve(rm, mu, n), cm = rb_solve(rm, mu, m);
    f[i] = truth_error(model, mu, truth[i], basis, cm);
    g[i] = truth_error(model, mu, truth[i], basis, cn);
    if (rd != nullptr && opts.method == ThetaMethod::dinkelbach)
    {
      rmv.push_back(residual_dual_norm(*rd, mu, cm));
      rn.push_back(residual_dual_norm(*rd, mu, cn));
    }
  }

  std::vector<double> g_filter = g;
  for (std::size_t i = 0; i < set.size(); i++)
  {
    if (g[i] <= opts.reproduced_tol * model.norm(truth[i], set[i]))
    {
      g_filter[i] = 0.0;
    }
  }
  for (auto i : opts.snapshots)
  {
    if (i >= g.size())
    {
      throw PreconditionError("compute_theta: snapshot index outside the sample set");
    }
    g_filter[i] = 0.0;
  }

  SaturationResult res;
  if (opts.method == ThetaMethod::train_ratio && opts.groups.empty())
  {
    res = theta_train(f, g_filter, opts.exclude_tol);
  }
  else
  {
    const Partition part = opts.groups.empty()
                             ? partition_positive(set, g_filter, opts.exclude_tol)
                             : partition_positive(set, g_filter, opts.groups, opts.exclude_tol);
    res.method = opts.method;
    res.excluded = part.excluded;
    for (const auto &sub : part.subsets)
    {
      std::vector<double> fs, gs, rms, rns;
      for (auto i : sub.indices)
      {
        fs.push_back(f[i]);
        gs.push_back(g[i]);
        if (!rn.empty())
        {
          rms.push_back(rmv[i]);
          rns.push_back(rn[i]);
        }
      }
      double theta_i = 0.0;
      std::size_t arg = 0;
      std::vector<double> its;
      if (opts.method == ThetaMethod::train_ratio)
      {
        const auto t = theta_train(fs, gs, 0.0);
        theta_i = t.theta;
        arg = t.argmax[0];
        its = {theta_i};
      }
      else
      {
        double q0 = 0.0;
        if (!rns.empty())
        {
          q0 = theta_initial_guess(rms, rns, opts.guess,
                                   [&](std::size_t k) { return fs[k] / gs[k]; })
                 .q0;
        }
        const auto d = dinkelbach_theta(fs, gs, q0, opts.tol);
        theta_i = d.theta;
        arg = d.argmax;
        its = d.iterates;
      }
      res.per_subset.push_back(theta_i);
      res.argmax.push_back(sub.indices[arg]);
      res.iterates.push_back(std::move(its));
    }
    res.theta = *std::max_element(res.per_subset.begin(), res.per_subset.end());
    res.valid = res.theta < 1.0;
  }
  res.f = std::move(f);
  res.g = std::move(g);
  return res;
}

void write_theta_header(std::ostream &os) { os << "N,M,Theta,valid\n"; }

void write_theta_row(std::ostream &os, int n, int m, double theta, bool valid)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", theta);
  os << n << ',' << m << ',' << buf << ',' << (valid ? 1 : 0) << '\n';
}

}  // namespace rbhier
