// SPDX-License-Identifier: Apache-2.0

#include "rbhier/taylor.hpp"

namespace rbhier
{

namespace
{

double binomial(int k, int m)
{
  double c = 1.0;
  for (int j = 1; j <= m; j++)
  {
    c = c * (k - m + j) / j;
  }
  return c;
}

}  // namespace

Vector taylor_rhs(const TruthModel &model, const Parameter &mu, int direction, int k,
                  const std::vector<Vector> &lower)
{
  if (k < 1 || static_cast<int>(lower.size()) < k)
  {
    throw PreconditionError("taylor_rhs: need u^(0..k-1) for order k = " + std::to_string(k));
  }
  if (direction < 0 || direction >= model.parameter_dim())
  {
    throw PreconditionError("taylor_rhs: direction out of range");
  }
  Vector rhs = Vector::Zero(model.dofs());
  const Vector df = evaluate_derivative(model.theta_f(), mu, direction, k);
  for (int q = 0; q < model.num_f(); q++)
  {
    if (df[q] != 0.0)
    {
      rhs += df[q] * model.f_terms()[q];
    }
  }
  for (int m = 1; m <= k; m++)
  {
    const Vector da = evaluate_derivative(model.theta_a(), mu, direction, m);
    const double c = binomial(k, m);
    for (int q = 0; q < model.num_a(); q++)
    {
      if (da[q] != 0.0)
      {
        rhs -= (c * da[q]) * (model.a_terms()[q] * lower[k - m]);
      }
    }
  }
  return rhs;
}

Vector taylor_snapshot(const TruthModel &model, const TruthSolver &solver, int direction, int k,
                       const std::vector<Vector> &lower)
{
  return solver.solve(taylor_rhs(model, solver.parameter(), direction, k, lower));
}

std::vector<Vector> taylor_derivatives(const TruthModel &model, const TruthSolver &solver,
                                       int direction, int order, const Vector &u)
{
  std::vector<Vector> all{u};
  for (int k = 1; k <= order; k++)
  {
    all.push_back(taylor_snapshot(model, solver, direction, k, all));
  }
  return {all.begin() + 1, all.end()};
}

int TaylorConfig::order_for(std::size_t n) const
{
  if (orders.empty())
  {
    return 0;
  }
  const int k = orders.size() == 1 ? orders[0] : orders.at(n);
  if (k < 0)
  {
    throw PreconditionError("TaylorConfig: negative derivative order");
  }
  return k;
}

TaylorSpace build_taylor_space(const TruthModel &model, const std::vector<Parameter> &snapshots,
                               const TaylorConfig &cfg, const ReducedBasis &base,
                               double drop_tol)
{
  if (cfg.orders.size() > 1 && cfg.orders.size() != snapshots.size())
  {
    throw PreconditionError("build_taylor_space: one order per snapshot parameter expected");
  }
  TaylorSpace out;
  out.basis = base;
  const int P = model.parameter_dim();
  int total_order = 0;
  for (std::size_t n = 0; n < snapshots.size(); n++)
  {
    const int K = cfg.order_for(n);
    out.nominal_m += 1 + K * P;
    total_order += K;
    if (K == 0)
    {
      continue;
    }
    TruthSolver solver(model, snapshots[n]);
    const Vector u = solver.solve(model.assemble_rhs(snapshots[n]));
    for (int i = 0; i < P; i++)
    {
      auto d = taylor_derivatives(model, solver, i, K, u);
      for (int k = 1; k <= K; k++)
      {
        out.snapshots.push_back(std::move(d[k - 1]));
        out.tags.push_back({static_cast<int>(n) + 1, i + 1, k, snapshots[n], false});
      }
    }
  }
  if (!out.snapshots.empty())
  {
    const int added = out.basis.extend_pod(out.snapshots, out.tags, drop_tol);
    if (added == 0 && total_order > 0)
    {
      throw PreconditionError("build_taylor_space: every derivative snapshot was dropped");
    }
  }
  out.effective_m = out.basis.size();
  return out;
}

}  // namespace rbhier
