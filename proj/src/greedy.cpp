// SPDX-License-Identifier: Apache-2.0

#include "rbhier/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>

namespace rbhier
{

TruthCache::TruthCache(const TruthModel &model, const SampleSet &set)
{
  u_.reserve(set.size());
  for (const auto &mu : set.points())
  {
    u_.push_back(truth_solve(model, mu));
  }
}

TruthCache TruthCache::load_or_compute(const TruthModel &model, const SampleSet &set,
                                       const std::filesystem::path &file)
{
  if (std::filesystem::exists(file))
  {
    const auto c = Container::load(file);
    const Matrix &U = c.complex_matrix("truth");
    if (U.rows() == model.dofs() && U.cols() == static_cast<Eigen::Index>(set.size()))
    {
      std::vector<Vector> u;
      for (Eigen::Index j = 0; j < U.cols(); j++)
      {
        u.push_back(U.col(j));
      }
      return TruthCache(std::move(u));
    }
  }
  TruthCache cache(model, set);
  Matrix U(model.dofs(), static_cast<Eigen::Index>(set.size()));
  for (std::size_t j = 0; j < set.size(); j++)
  {
    U.col(static_cast<Eigen::Index>(j)) = cache[j];
  }
  Container c;
  c.put("truth", U);
  c.save(file);
  return cache;
}

void write_greedy_trace(std::ostream &os, const GreedyTrace &trace, int parameter_dim,
                        bool with_timing)
{
  os << "N";
  for (int j = 1; j <= parameter_dim; j++)
  {
    os << ",mu_" << j;
  }
  os << ",selector,max_value,theta,K_N,t_offline\n";
  char buf[32];
  auto num = [&](double v) -> const char *
  {
    if (std::isnan(v))
    {
      return "NA";
    }
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
  };
  for (const auto &r : trace.records)
  {
    os << r.n;
    for (double m : r.mu)
    {
      os << ',' << num(m);
    }
    os << ',' << num(r.selector);
    os << ',' << num(r.max_value);
    os << ',' << num(r.theta);
    os << ',';
    if (r.k_n >= 0)
    {
      os << r.k_n;
    }
    else
    {
      os << "NA";
    }
    os << ',' << (with_timing ? num(r.t_offline) : "NA") << '\n';
  }
}

namespace
{

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Largest value, lowest index on ties. NaN never wins.
std::pair<std::size_t, double> argmax(const std::vector<double> &v)
{
  std::size_t arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); i++)
  {
    if (v[i] > best)
    {
      best = v[i];
      arg = i;
    }
  }
  return {arg, best};
}

bool contains(const std::vector<std::size_t> &v, std::size_t x)
{
  return std::find(v.begin(), v.end(), x) != v.end();
}

// Reduced solve that maps a singular reduced system to "unresolved" (infinite selector), so
// the greedy picks such a parameter rather than aborting.
template <typename Fn>
double or_infinity(Fn &&fn)
{
  try
  {
    return fn();
  }
  catch (const SingularSystemError &)
  {
    return std::numeric_limits<double>::infinity();
  }
}

void check_train(const SampleSet &train, const GreedyOptions &opts)
{
  if (train.empty())
  {
    throw PreconditionError("greedy: empty training set");
  }
  if (opts.n_max < 1 || opts.first_index >= train.size())
  {
    throw PreconditionError("greedy: invalid N_max or first index");
  }
}

// Shared loop of strong and weak greedy: `selector(rm, basis, N)` returns per-point values.
template <typename Selector>
GreedyResult run_greedy(const TruthModel &model, const SampleSet &train,
                        const GreedyOptions &opts, const std::string &name,
                        const std::function<Vector(std::size_t)> &snap, Selector &&selector)
{
  check_train(train, opts);
  const auto t0 = Clock::now();
  GreedyResult res{make_basis(model), {}, {}};
  res.trace.selector_name = name;
  std::size_t next = opts.first_index;
  double next_value = std::numeric_limits<double>::quiet_NaN();
  for (int N = 1; N <= opts.n_max; N++)
  {
    if (contains(res.selected, next))
    {
      res.trace.stop_reason = "duplicate selection";
      break;
    }
    SnapshotTag tag{N, 0, 0, train[next], false};
    if (res.basis.extend_gram_schmidt({snap(next)}, {tag}, opts.drop_tol) == 0)
    {
      res.trace.stop_reason = "linearly dependent snapshot";
      break;
    }
    res.selected.push_back(next);
    const ReducedModel rm = project(model, res.basis);
    const std::vector<double> values = selector(rm, res.basis, N);
    const auto [arg, best] = argmax(values);

    GreedyRecord rec;
    rec.n = N;
    rec.mu = train[next];
    rec.selector = next_value;
    rec.max_value = best;
    rec.t_offline = since(t0);
    res.trace.records.push_back(rec);

    if (best <= opts.tol)
    {
      res.trace.stop_reason = "tolerance reached";
      break;
    }
    next = arg;
    next_value = best;
  }
  if (res.trace.stop_reason.empty())
  {
    res.trace.stop_reason = "N_max reached";
  }
  return res;
}

}  // namespace

GreedyResult strong_greedy(const TruthModel &model, const SampleSet &train,
                           const TruthCache &truth, const GreedyOptions &opts)
{
  if (truth.size() != train.size())
  {
    throw PreconditionError("strong_greedy: truth cache does not match the training set");
  }
  return run_greedy(model, train, opts, "strong",
                    [&](std::size_t i) { return truth[i]; },
                    [&](const ReducedModel &rm, const ReducedBasis &basis, int N)
                    {
                      std::vector<double> err(train.size());
                      for (std::size_t i = 0; i < train.size(); i++)
                      {
                        err[i] = or_infinity(
                          [&]
                          {
                            const Vector c = rb_solve(rm, train[i], N);
                            return truth_error(model, train[i], truth[i], basis, c);
                          });
                      }
                      return err;
                    });
}

BetaProvider exact_beta_provider(const TruthModel &model, const SampleSet &train)
{
  auto beta = std::make_shared<std::vector<double>>();
  for (const auto &mu : train.points())
  {
    beta->push_back(inf_sup_only(model.assemble_operator(mu), model.reference_gram()).beta);
  }
  return [beta](std::size_t i, const Parameter &) { return (*beta)[i]; };
}

BetaProvider scm_beta_provider(const ScmState &state)
{
  return [&state](std::size_t, const Parameter &mu) { return state.lower_bound(mu); };
}

BetaProvider min_theta_beta_provider(const TruthModel &model)
{
  const Parameter ref = model.reference_parameter();
  return [&model, ref](std::size_t, const Parameter &mu)
  { return min_theta_lower_bound(model, mu, ref, 1.0); };
}

GreedyResult weak_greedy_std(const TruthModel &model, const SampleSet &train,
                             const BetaProvider &beta, const GreedyOptions &opts,
                             const std::string &source_name)
{
  std::vector<double> beta_lb(train.size());
  for (std::size_t i = 0; i < train.size(); i++)
  {
    beta_lb[i] = beta(i, train[i]);
  }
  return run_greedy(model, train, opts, "weak_std_" + source_name,
                    [&](std::size_t i) { return truth_solve(model, train[i]); },
                    [&](const ReducedModel &rm, const ReducedBasis &basis, int N)
                    {
                      const ResidualData rd = build_residual_data(model, basis);
                      std::vector<double> est(train.size());
                      for (std::size_t i = 0; i < train.size(); i++)
                      {
                        est[i] = or_infinity(
                          [&]
                          {
                            const Vector c = rb_solve(rm, train[i], N);
                            return delta_std(rd, train[i], c, beta_lb[i]);
                          });
                      }
                      return est;
                    });
}

HierGreedyResult weak_greedy_hier(const TruthModel &model, const SampleSet &train,
                                  const TruthCache &truth, const HierGreedyOptions &opts)
{
  check_train(train, opts);
  if (truth.size() != train.size())
  {
    throw PreconditionError("weak_greedy_hier: truth cache does not match the training set");
  }
  if (opts.k_max < 1)
  {
    throw PreconditionError("weak_greedy_hier: K_max must be at least 1");
  }
  const auto t0 = Clock::now();
  const int P = model.parameter_dim();
  HierGreedyResult res;
  res.xn = make_basis(model);
  res.trace.selector_name = "weak_hier";
  std::vector<Vector> taylor;
  std::vector<SnapshotTag> taylor_tags;

  std::size_t next = opts.first_index;
  double next_value = std::numeric_limits<double>::quiet_NaN();
  ThetaOptions topts;
  topts.exclude_tol = opts.exclude_tol;

  for (int N = 1; N <= opts.n_max; N++)
  {
    if (contains(res.selected, next))
    {
      throw GreedyError("weak_greedy_hier: parameter " + to_string(train[next]) +
                        " selected twice");
    }
    const Parameter mu_n = train[next];
    if (res.xn.extend_gram_schmidt({truth[next]}, {{N, 0, 0, mu_n, false}}, opts.drop_tol) == 0)
    {
      res.trace.stop_reason = "linearly dependent snapshot";
      break;
    }
    res.selected.push_back(next);

    // Raise the Taylor order at μ_N until the saturation constant drops below one.
    TruthSolver solver(model, mu_n);
    std::vector<std::vector<Vector>> lower(P, std::vector<Vector>{truth[next]});
    int k = 0;
    SaturationResult sat;
    ReducedModel rm_m = project(model, res.xn);
    for (k = 1; k <= opts.k_max; k++)
    {
      for (int i = 0; i < P; i++)
      {
        Vector d = taylor_snapshot(model, solver, i, k, lower[i]);
        lower[i].push_back(d);
        taylor.push_back(std::move(d));
        taylor_tags.push_back({N, i + 1, k, mu_n, false});
      }
      res.xm = res.xn;
      res.xm.extend_pod(taylor, taylor_tags, opts.drop_tol);
      if (res.xm.size() <= N)
      {
        continue;
      }
      rm_m = project(model, res.xm);
      topts.snapshots = res.selected;
      sat = compute_theta(model, train, truth.solutions(), res.xm, rm_m, N, res.xm.size(),
                          topts);
      res.trace.theta_log.push_back({N, k, res.xm.size(), sat.theta});
      if (sat.valid)
      {
        break;
      }
    }
    const int K_N = std::min(k, opts.k_max);
    res.orders.push_back(K_N);
    res.theta = sat.theta;

    GreedyRecord rec;
    rec.n = N;
    rec.mu = mu_n;
    rec.selector = next_value;
    rec.theta = sat.theta;
    rec.k_n = K_N;
    rec.m = res.xm.size();

    if (!sat.valid)
    {
      res.saturation_failed = true;
      rec.max_value = std::numeric_limits<double>::quiet_NaN();
      rec.t_offline = since(t0);
      res.trace.records.push_back(rec);
      res.trace.stop_reason = "saturation failure";
      return res;
    }

    std::vector<double> delta(train.size());
    const int M = res.xm.size();
    for (std::size_t i = 0; i < train.size(); i++)
    {
      delta[i] = or_infinity(
        [&]
        {
          const Vector cn = rb_solve(rm_m, train[i], N);
          const Vector cm = rb_solve(rm_m, train[i], M);
          return delta_hier(rm_m, train[i], cn, cm);
        });
    }
    const auto [arg, best] = argmax(delta);
    rec.max_value = best;
    rec.t_offline = since(t0);
    res.trace.records.push_back(rec);
    if (best < opts.tol || best == 0.0)
    {
      res.trace.stop_reason = "tolerance reached";
      return res;
    }
    next = arg;
    next_value = best;
  }
  res.trace.stop_reason = "N_max reached";
  return res;
}

GreedyResult naive_lagrange_greedy(const TruthModel &model, const SampleSet &train,
                                   const GreedyOptions &opts, std::size_t second_index)
{
  check_train(train, opts);
  if (second_index >= train.size() || second_index == opts.first_index)
  {
    throw PreconditionError("naive_lagrange_greedy: need two distinct start parameters");
  }
  const auto t0 = Clock::now();
  GreedyResult res{make_basis(model), {}, {}};
  res.trace.selector_name = "naive_lagrange";
  for (auto idx : {opts.first_index, second_index})
  {
    SnapshotTag tag{static_cast<int>(res.selected.size()) + 1, 0, 0, train[idx], false};
    res.basis.extend_gram_schmidt({truth_solve(model, train[idx])}, {tag}, opts.drop_tol);
    res.selected.push_back(idx);
  }
  for (int N = 1; N <= opts.n_max; N++)
  {
    const int M = N + 1;
    const ReducedModel rm = project(model, res.basis);
    std::vector<double> delta(train.size());
    for (std::size_t i = 0; i < train.size(); i++)
    {
      delta[i] = or_infinity(
        [&]
        {
          return delta_hier(rm, train[i], rb_solve(rm, train[i], N), rb_solve(rm, train[i], M));
        });
    }
    const auto [arg, best] = argmax(delta);
    GreedyRecord rec;
    rec.n = N;
    rec.m = M;
    rec.mu = train[res.selected[N - 1]];
    rec.max_value = best;
    rec.t_offline = since(t0);
    res.trace.records.push_back(rec);
    if (best <= opts.tol)
    {
      res.trace.stop_reason = "tolerance reached";
      return res;
    }
    if (contains(res.selected, arg))
    {
      throw GreedyError("naive Lagrange pairing selected " + to_string(train[arg]) +
                        " again at N = " + std::to_string(N) +
                        ": Δ_{N,N+1} is largest at the snapshot that X_N lacks, so pairing "
                        "Lagrange spaces can repeat snapshots");
    }
    SnapshotTag tag{M + 1, 0, 0, train[arg], false};
    res.basis.extend_gram_schmidt({truth_solve(model, train[arg])}, {tag}, opts.drop_tol);
    res.selected.push_back(arg);
  }
  res.trace.stop_reason = "N_max reached";
  return res;
}

LagrangePair build_lagrange_pair(const ReducedBasis &greedy_basis, int n, MRule rule)
{
  const int m = n + static_cast<int>(rule);
  if (n < 1 || m > greedy_basis.size())
  {
    throw PreconditionError("build_lagrange_pair: need 1 ≤ N and N + rule ≤ basis size (" +
                            std::to_string(greedy_basis.size()) + ")");
  }
  return {greedy_basis.prefix(n), greedy_basis.prefix(m)};
}

}  // namespace rbhier
