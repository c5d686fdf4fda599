// Acceptance checks, one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include "rbhier/benchmarks.hpp"
#include "rbhier/estimators.hpp"
#include "rbhier/experiment.hpp"
#include "rbhier/greedy.hpp"
#include "rbhier/inf_sup.hpp"

using namespace rbhier;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace
{

// Max training error of the strong greedy at N = 10 on the thermal block over [0.5, 1]^2
// (33 cells, 41 x 41 grid), from the reference run.
constexpr double reference_max_error_n10 = 2.143e-11;

double since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Parameter par(std::initializer_list<double> v)
{
  Parameter p(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), p.begin());
  return p;
}

ParameterDomain box(double lo, double hi, int dim)
{
  return ParameterDomain(RealVector::Constant(dim, lo), RealVector::Constant(dim, hi));
}

TruthModel helmholtz(double lo, double hi, int elements, int degree)
{
  HelmholtzConfig h;
  h.elements = elements;
  h.degree = degree;
  h.reference_wavenumber = 0.5 * (lo + hi);
  return build_helmholtz_1d(h);
}

// A truth model, its training set and truth cache, and a strong greedy basis.
struct Study
{
  std::unique_ptr<TruthModel> model;
  std::unique_ptr<SampleSet> train;
  std::unique_ptr<TruthCache> truth;
  GreedyResult greedy;
  std::unique_ptr<ReducedModel> rm;
  double seconds = 0.0;

  Study(TruthModel m, SampleSet t, int n_max)
  {
    const auto t0 = Clock::now();
    model = std::make_unique<TruthModel>(std::move(m));
    train = std::make_unique<SampleSet>(std::move(t));
    truth = std::make_unique<TruthCache>(*model, *train);
    GreedyOptions g;
    g.n_max = n_max;
    greedy = strong_greedy(*model, *train, *truth, g);
    rm = std::make_unique<ReducedModel>(project(*model, greedy.basis));
    seconds = since(t0);
  }

  SaturationResult theta(int n, int m) const
  {
    ThetaOptions o;
    o.snapshots.assign(greedy.selected.begin(), greedy.selected.begin() + n);
    return compute_theta(*model, *train, truth->solutions(), greedy.basis, *rm, n, m, o);
  }
};

const Study &thermal_p1()
{
  static const Study s(build_thermal_block({33}), tensor_grid(box(0.5, 1.0, 2), std::vector{41, 41}),
                       12);
  return s;
}

const Study &thermal_p2()
{
  static const Study s(build_thermal_block({33}),
                       tensor_grid(box(0.02, 1.0, 2), std::vector{41, 41}), 12);
  return s;
}

const Study &helmholtz_high()
{
  static const Study s(helmholtz(90, 100, 100, 6), tensor_grid(box(90, 100, 1), std::vector{201}),
                       13);
  return s;
}

const HierGreedyResult &helmholtz_hier()
{
  static const HierGreedyResult r = []
  {
    const Study &s = helmholtz_high();
    HierGreedyOptions h;
    h.n_max = 10;
    h.k_max = 4;
    return weak_greedy_hier(*s.model, *s.train, *s.truth, h);
  }();
  return r;
}

// X_M of the hierarchical run at N, rebuilt from the recorded Taylor orders.
ReducedBasis hier_space(int n)
{
  const Study &s = helmholtz_high();
  const auto &h = helmholtz_hier();
  std::vector<Parameter> mus;
  for (int j = 0; j < n; j++)
  {
    mus.push_back((*s.train)[h.selected[j]]);
  }
  TaylorConfig tc;
  tc.orders.assign(h.orders.begin(), h.orders.begin() + n);
  return build_taylor_space(*s.model, mus, tc, h.xn.prefix(n)).basis;
}

// SCM on the Helmholtz range [95, 100] at 240 dofs.
struct HelmholtzScm
{
  std::unique_ptr<TruthModel> model;
  std::unique_ptr<SampleSet> train;
  std::unique_ptr<ScmState> state;
  double seconds = 0.0;
};

const HelmholtzScm &helmholtz_scm()
{
  static const HelmholtzScm s = []
  {
    HelmholtzScm h;
    h.model = std::make_unique<TruthModel>(helmholtz(95, 100, 40, 6));
    h.train = std::make_unique<SampleSet>(tensor_grid(box(95, 100, 1), std::vector{1001}));
    ScmConfig cfg;
    cfg.mode = ScmMode::infsup_squared;
    cfg.k_max = 500;
    const auto t0 = Clock::now();
    h.state = std::make_unique<ScmState>(scm_offline(*h.model, *h.train, cfg));
    h.seconds = since(t0);
    return h;
  }();
  return s;
}

struct Outcome
{
  bool pass = false;
  std::string detail;
};

// 1. Reduced Gramian form of Δ_{N,M} against the truth-space norm.
Outcome gramian_equivalence()
{
  const auto t0 = Clock::now();
  double worst = 0.0;
  int count = 0;
  auto check = [&](const TruthModel &model, const ParameterDomain &dom,
                   const std::vector<Parameter> &snaps, std::uint64_t seed)
  {
    ReducedBasis basis = make_basis(model);
    std::vector<Vector> u;
    for (const auto &mu : snaps)
    {
      u.push_back(truth_solve(model, mu));
    }
    basis.extend_gram_schmidt(u, {});
    const ReducedModel rm = project(model, basis);
    const int m = basis.size(), n = m - 2;
    const SampleSet sample = random_sample(dom, 50, seed);
    for (const auto &mu : sample.points())
    {
      const Vector cn = rb_solve(rm, mu, n), cm = rb_solve(rm, mu, m);
      const double reduced = delta_hier(rm, mu, cn, cm);
      const double truth = model.norm(reconstruct(basis, cm) - reconstruct(basis, cn), mu);
      worst = std::max(worst, std::abs(reduced - truth) / truth);
      count++;
    }
  };
  check(build_thermal_block({33}), box(0.02, 1.0, 2),
        {par({0.1, 0.9}), par({0.5, 0.2}), par({0.9, 0.05}), par({0.3, 0.3 * 0.7}),
         par({0.04, 0.6})},
        11);
  check(helmholtz(90, 100, 100, 6), box(90, 100, 1),
        {par({90}), par({92.5}), par({95}), par({97.5}), par({100})}, 12);
  const double t = since(t0);
  return {worst <= 1e-10 && t < 60.0,
          std::to_string(count) + " points, max relative difference " + sci(worst) + ", " +
            sci(t) + " s"};
}

// 2. Training-set sandwich and effectivity for every (N, M) with Θ < 1.
Outcome hierarchical_sandwich()
{
  int checked_pairs = 0, checked_points = 0, violations = 0;
  double worst_eta = 0.0;
  auto check = [&](const SampleSet &train, const ReducedModel &rm, const SaturationResult &sat,
                   int n, int m)
  {
    const double theta = sat.theta;
    if (!(theta < 1.0))
    {
      return;
    }
    checked_pairs++;
    std::vector<bool> excluded(train.size(), false);
    for (std::size_t i : sat.excluded)
    {
      excluded[i] = true;
    }
    for (std::size_t i = 0; i < train.size(); i++)
    {
      if (excluded[i])
      {
        continue;
      }
      const Vector cn = rb_solve(rm, train[i], n), cm = rb_solve(rm, train[i], m);
      const double delta = delta_hier(rm, train[i], cn, cm);
      const double e = sat.g[i];
      const bool ok = delta / (1.0 + theta) <= e * (1.0 + 1e-12) &&
                      e <= delta / (1.0 - theta) * (1.0 + 1e-12);
      const double eta = delta / (1.0 - theta) / e;
      const double hi = (1.0 + theta) / (1.0 - theta);
      const bool eta_ok = eta >= 1.0 - 1e-9 && eta <= hi * (1.0 + 1e-9);
      violations += (!ok || !eta_ok);
      worst_eta = std::max(worst_eta, eta / hi);
      checked_points++;
    }
  };
  const Study &p1 = thermal_p1();
  for (int n = 1; n <= 10; n++)
  {
    for (int r : {1, 2})
    {
      if (n + r > p1.greedy.basis.size())
      {
        continue;
      }
      check(*p1.train, *p1.rm, p1.theta(n, n + r), n, n + r);
    }
  }
  const Study &h = helmholtz_high();
  const auto &hier = helmholtz_hier();
  for (int n = 1; n <= hier.xn.size(); n++)
  {
    const ReducedBasis xm = hier_space(n);
    const ReducedModel rm = project(*h.model, xm);
    ThetaOptions o;
    o.snapshots.assign(hier.selected.begin(), hier.selected.begin() + n);
    const auto sat =
      compute_theta(*h.model, *h.train, h.truth->solutions(), xm, rm, n, xm.size(), o);
    check(*h.train, rm, sat, n, xm.size());
  }
  return {violations == 0 && checked_pairs > 0,
          std::to_string(checked_pairs) + " (N, M) pairs, " + std::to_string(checked_points) +
            " training points, " + std::to_string(violations) +
            " violations, max eta / upper bound " + sci(worst_eta)};
}

// 3. Residual sandwich with exact β and γ of the generalized eigenproblem.
Outcome residual_sandwich()
{
  int violations = 0, count = 0;
  double tight_lo = 0.0, tight_hi = 0.0;
  auto check = [&](const TruthModel &model, const ParameterDomain &dom,
                   const std::vector<Parameter> &snaps, std::uint64_t seed)
  {
    ReducedBasis basis = make_basis(model);
    std::vector<Vector> u;
    for (const auto &mu : snaps)
    {
      u.push_back(truth_solve(model, mu));
    }
    basis.extend_gram_schmidt(u, {});
    const ReducedModel rm = project(model, basis);
    const SampleSet sample = random_sample(dom, 50, seed);
    for (const auto &mu : sample.points())
    {
      const Vector c = rb_solve(rm, mu, basis.size());
      const Vector un = reconstruct(basis, c);
      const Vector ut = truth_solve(model, mu);
      const double e = model.norm(ut - un, mu);
      const SparseMatrix G = model.gram(mu);
      const Vector r = model.assemble_rhs(mu) - model.assemble_operator(mu) * un;
      const double rn = std::sqrt(std::max(r.dot(GramSolver(G).solve(r)).real(), 0.0));
      const auto bg = stability_constants(model.assemble_operator(mu), G, EigenRoute::dense);
      const double lo = rn / bg.gamma, hi = rn / bg.beta;
      violations += !(lo <= e * (1.0 + 1e-8) && e <= hi * (1.0 + 1e-8));
      tight_lo = std::max(tight_lo, lo / e);
      tight_hi = std::max(tight_hi, e / hi);
      count++;
    }
  };
  check(build_thermal_block({21}), box(0.02, 1.0, 2), {par({0.5, 0.5}), par({0.1, 0.8})}, 21);
  check(helmholtz(90, 100, 80, 6), box(90, 100, 1), {par({91}), par({95}), par({99})}, 22);
  return {violations == 0,
          std::to_string(count) + " points, " + std::to_string(violations) +
            " violations, max (R/gamma)/e " + sci(tight_lo) + ", max e/(R/beta) " +
            sci(tight_hi)};
}

// 4. Dinkelbach against brute force on random finite sets.
Outcome dinkelbach_exact()
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(1e-3, 1.0), logsize(1.0, 4.0);
  int failures = 0, max_iter = 0;
  for (int t = 0; t < 20; t++)
  {
    const std::size_t n = static_cast<std::size_t>(std::round(std::pow(10.0, logsize(rng))));
    std::vector<double> f(n), g(n);
    for (std::size_t i = 0; i < n; i++)
    {
      f[i] = unit(rng);
      g[i] = unit(rng);
    }
    double brute = 0.0, fmax = 0.0;
    for (std::size_t i = 0; i < n; i++)
    {
      brute = std::max(brute, f[i] / g[i]);
      fmax = std::max(fmax, f[i]);
    }
    const auto d = dinkelbach_theta(f, g, 0.0);
    const double tol = 1e-10 * fmax;
    failures += !(d.theta == brute && std::abs(d.final_value) < tol &&
                  d.iterations <= static_cast<int>(n));
    max_iter = std::max(max_iter, d.iterations);
  }
  return {failures == 0, "20 sets, " + std::to_string(failures) +
                           " mismatches, max iterations " + std::to_string(max_iter)};
}

// 5. First-derivative snapshots against central differences.
Outcome taylor_finite_differences()
{
  bool ok = true;
  std::string detail;
  auto check = [&](const std::string &name, const TruthModel &model, const Parameter &mu,
                   int dir, double h0)
  {
    TruthSolver solver(model, mu);
    const Vector u = solver.solve(model.assemble_rhs(mu));
    const Vector du = taylor_derivatives(model, solver, dir, 1, u)[0];
    const double scale = model.norm(du, mu);
    std::vector<double> err;
    for (double h : {h0, h0 / 2, h0 / 4})
    {
      Parameter a = mu, b = mu;
      a[dir] += h;
      b[dir] -= h;
      const Vector fd = (truth_solve(model, a) - truth_solve(model, b)) / (2.0 * h);
      err.push_back(model.norm(fd - du, mu) / scale);
    }
    const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
    const bool pass = std::min(o1, o2) >= 1.9 && err[2] <= 1e-5;
    ok = ok && pass;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s orders %.2f %.2f final %.1e; ", name.c_str(), o1, o2,
                  err[2]);
    detail += buf;
  };
  const TruthModel tb = build_thermal_block({33});
  const Parameter mt = par({0.7, 0.4});
  check("thermal d1", tb, mt, 0, 2e-3 * mt[0]);
  check("thermal d2", tb, mt, 1, 2e-3 * mt[1]);
  const TruthModel hm = helmholtz(90, 100, 100, 6);
  check("helmholtz", hm, par({93.0}), 0, 2e-4 * 93.0);
  return {ok, detail};
}

// 6. SCM soundness; thermal convergence; Helmholtz gap history.
Outcome scm_soundness()
{
  std::string detail;
  int violations = 0;
  // Thermal block on [0.02, 1]^2.
  const TruthModel tb = build_thermal_block({15});
  const SampleSet ttrain = tensor_grid(box(0.02, 1.0, 2), std::vector{21, 21});
  ScmConfig tc;
  tc.mode = ScmMode::coercive;
  tc.k_max = 10;
  const ScmState ts = scm_offline(tb, ttrain, tc);
  const SparseMatrix gref = tb.reference_gram();
  for (const auto &mu : ttrain.points())
  {
    const double alpha =
      hermitian_pencil_extremes(tb.assemble_operator(mu), gref, EigenRoute::dense).lower;
    violations += !(ts.lower_bound(mu) <= alpha * (1 + 1e-9) + 1e-12 &&
                    alpha <= ts.upper_bound(mu) * (1 + 1e-9) + 1e-12);
  }
  const double tgap = ts.history().empty() ? 1.0 : ts.history().back().gap;
  const bool thermal_ok = ts.converged() && ts.num_constraints() <= 10 && tgap <= 1e-6;
  detail += "thermal: " + std::to_string(ts.num_constraints()) + " constraints, gap " +
            sci(tgap) + "; ";

  // Helmholtz on [95, 100].
  const HelmholtzScm &h = helmholtz_scm();
  const SparseMatrix href = h.model->reference_gram();
  for (const auto &mu : h.train->points())
  {
    const double beta = inf_sup_only(h.model->assemble_operator(mu), href, EigenRoute::dense).beta;
    violations += !(h.state->lower_bound(mu) <= beta * (1 + 1e-9) &&
                    beta <= h.state->upper_bound(mu) * (1 + 1e-9));
  }
  const auto &hist = h.state->history();
  bool logged = !hist.empty() && static_cast<int>(hist.size()) == h.state->num_constraints();
  for (std::size_t k = 0; k < hist.size(); k++)
  {
    logged = logged && hist[k].k == static_cast<int>(k) + 1 && std::isfinite(hist[k].gap);
  }
  auto gap_at = [&](std::size_t k) { return hist[std::min(k, hist.size()) - 1].gap; };
  detail += "helmholtz: " + std::to_string(h.state->num_constraints()) + " constraints (" +
            (h.state->converged() ? "converged" : "not converged") + "), gap " +
            sci(gap_at(10)) + " / " + sci(gap_at(100)) + " / " + sci(gap_at(hist.size())) +
            " after 10 / 100 / " + std::to_string(hist.size()) + ", " + sci(h.seconds) +
            " s; soundness violations " + std::to_string(violations);
  return {thermal_ok && logged && violations == 0, detail};
}

// 7. Strong greedy error decay on the thermal block over [0.5, 1]^2.
Outcome greedy_decay()
{
  const Study &s = thermal_p1();
  const auto &rec = s.greedy.trace.records;
  if (rec.size() < 10)
  {
    return {false, "greedy stopped at N = " + std::to_string(rec.size())};
  }
  const double first = rec[0].max_value, tenth = rec[9].max_value;
  bool monotone = true;
  for (std::size_t k = 1; k < rec.size(); k++)
  {
    monotone = monotone && rec[k].max_value <= 1.05 * rec[k - 1].max_value;
  }
  const double orders = std::log10(first / tenth);
  const double drift = reference_max_error_n10 > 0.0
                         ? std::abs(tenth / reference_max_error_n10 - 1.0)
                         : std::numeric_limits<double>::infinity();
  return {orders >= 3.0 && drift <= 0.05 && monotone && s.seconds < 300.0,
          "max error " + sci(first) + " at N=1, " + sci(tenth) + " at N=10 (" +
            sci(orders) + " orders), reference " + sci(reference_max_error_n10) +
            ", drift " + sci(drift) + ", " + sci(s.seconds) + " s"};
}

double median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 8. Θ_{N,N+2} against Θ_{N,N+1} on the thermal block over [0.02, 1]^2.
Outcome theta_improvement()
{
  const Study &s = thermal_p2();
  std::vector<double> t1, t2;
  for (int n = 1; n <= 10; n++)
  {
    t1.push_back(s.theta(n, n + 1).theta);
    t2.push_back(s.theta(n, n + 2).theta);
  }
  const double m1 = median(t1), m2 = median(t2);
  const double max2 = *std::max_element(t2.begin(), t2.end());
  return {m2 < m1 && max2 < 1.0, "median Theta_{N,N+1} " + sci(m1) + ", median Theta_{N,N+2} " +
                                   sci(m2) + ", max Theta_{N,N+2} " + sci(max2) +
                                   ", Theta_{1,2} " + sci(t1[0])};
}

// 9. Saturation failure of Lagrange pairs and its repair by Taylor enrichment.
Outcome saturation_failure()
{
  const Study &s = helmholtz_high();
  std::string failures;
  for (int n = 1; n <= 10; n++)
  {
    for (int r : {1, 2, 3})
    {
      if (n + r > s.greedy.basis.size())
      {
        continue;
      }
      const double th = s.theta(n, n + r).theta;
      if (th >= 1.0 && n <= 6)
      {
        char buf[64];
        std::snprintf(buf, sizeof buf, "(N=%d, M=N+%d: %.4f) ", n, r, th);
        failures += buf;
      }
    }
  }
  const auto &h = helmholtz_hier();
  double worst = 0.0;
  std::string orders;
  for (const auto &rec : h.trace.records)
  {
    worst = std::max(worst, rec.theta);
    orders += std::to_string(rec.k_n);
  }
  const bool repaired = !h.saturation_failed && worst < 1.0 && h.xn.size() == 10;
  return {!failures.empty() && repaired,
          "Lagrange Theta >= 1 at " + (failures.empty() ? std::string("none ") : failures) +
            "; hierarchical greedy N=" + std::to_string(h.xn.size()) + ", K_N " + orders +
            ", max Theta " + sci(worst)};
}

// Median over test points of the per-point median time of `fn(mu)`, each sample a batch.
double online_time(const SampleSet &test, const std::function<void(const Parameter &)> &fn)
{
  constexpr int batch = 50;
  std::vector<double> t;
  for (const auto &mu : test.points())
  {
    t.push_back(median_seconds(
                  [&]
                  {
                    for (int b = 0; b < batch; b++)
                    {
                      fn(mu);
                    }
                  }) /
                batch);
  }
  return median(t);
}

// 10. Online cost independent of the truth size; Δ_hier against Δ_std with SCM.
Outcome online_efficiency()
{
  volatile double sink = 0.0;
  const int n = 8, m = n + 3;
  auto hier_time = [&](int elements)
  {
    const TruthModel model = helmholtz(95, 100, elements, 6);
    const SampleSet train = tensor_grid(box(95, 100, 1), std::vector{101});
    GreedyOptions g;
    g.n_max = m;
    const TruthCache truth(model, train);
    const auto gr = strong_greedy(model, train, truth, g);
    const ReducedModel rm = project(model, gr.basis);
    const SampleSet test = random_sample(box(95, 100, 1), 30, 5);
    return online_time(test,
                       [&](const Parameter &mu)
                       {
                         const Vector cn = rb_solve(rm, mu, n), cm = rb_solve(rm, mu, m);
                         sink = delta_hier(rm, mu, cn, cm);
                       });
  };
  const double small = hier_time(60), large = hier_time(600);
  const double change = std::abs(large / small - 1.0);

  // Δ_std with SCM and Δ_{N,N+2} on the SCM model, equal N.
  const HelmholtzScm &h = helmholtz_scm();
  GreedyOptions g;
  g.n_max = n + 2;
  const SampleSet train = tensor_grid(box(95, 100, 1), std::vector{101});
  const auto gr = strong_greedy(*h.model, train, TruthCache(*h.model, train), g);
  const ReducedModel rm = project(*h.model, gr.basis);
  const ResidualData rd = build_residual_data(*h.model, gr.basis);
  const SampleSet test = random_sample(box(95, 100, 1), 30, 6);
  std::vector<Vector> cn;
  for (const auto &mu : test.points())
  {
    cn.push_back(rb_solve(rm, mu, n));
  }
  auto index_of = [&](const Parameter &mu) { return static_cast<std::size_t>(test.find(mu)); };
  const double t_std = online_time(test,
                                   [&](const Parameter &mu)
                                   {
                                     const double lb = h.state->lower_bound(mu);
                                     sink = frame_factor(rd, mu) *
                                            residual_dual_norm(rd, mu, cn[index_of(mu)]) / lb;
                                   });
  const double t_hier = online_time(test,
                                    [&](const Parameter &mu)
                                    {
                                      const Vector cm = rb_solve(rm, mu, n + 2);
                                      sink = delta_hier(rm, mu, cn[index_of(mu)], cm);
                                    });
  const double speedup = t_std / t_hier;
  return {change <= 0.2 && speedup >= 5.0,
          "Delta_hier " + sci(small) + " s at 60 dofs, " + sci(large) + " s at 600 dofs (change " +
            sci(change) + "); Delta_std+SCM " + sci(t_std) + " s vs Delta_hier " + sci(t_hier) +
            " s (speedup " + sci(speedup) + ")"};
}

// 11. Every snapshot parameter is reproduced by the final basis.
Outcome snapshot_reproduction()
{
  double worst = 0.0;
  int count = 0;
  auto check = [&](const TruthModel &model, const SampleSet &train, const TruthCache &truth,
                   const ReducedBasis &basis, const std::vector<std::size_t> &selected)
  {
    const ReducedModel rm = project(model, basis);
    for (std::size_t i : selected)
    {
      const Vector c = rb_solve(rm, train[i], basis.size());
      const double e = truth_error(model, train[i], truth[i], basis, c);
      worst = std::max(worst, e / model.norm(truth[i], train[i]));
      count++;
    }
  };
  for (const Study *s : {&thermal_p1(), &thermal_p2(), &helmholtz_high()})
  {
    check(*s->model, *s->train, *s->truth, s->greedy.basis, s->greedy.selected);
  }
  const Study &h = helmholtz_high();
  check(*h.model, *h.train, *h.truth, helmholtz_hier().xn, helmholtz_hier().selected);
  return {worst <= 1e-9,
          std::to_string(count) + " snapshots, max relative error " + sci(worst)};
}

std::string slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 12. Two runs of the same configs give byte-identical CSV and figure files.
Outcome determinism()
{
  std::vector<ExperimentConfig> configs;
  {
    ExperimentConfig c;
    c.cells_per_side = 12;
    c.lower = RealVector::Constant(2, 0.02);
    c.upper = RealVector::Constant(2, 1.0);
    c.train_points = {15, 15};
    c.test_size = 20;
    c.sampling = Sampling::weak_std;
    c.n_max = 6;
    c.m_rules = {1, 2, 3};
    c.taylor_orders = {1, 2};
    c.beta_source = BetaSource::scm;
    configs.push_back(c);
  }
  {
    ExperimentConfig c;
    c.problem = Problem::helmholtz;
    c.lower = RealVector::Constant(1, 90.0);
    c.upper = RealVector::Constant(1, 100.0);
    c.elements = 50;
    c.degree = 6;
    c.train_points = {101};
    c.test_size = 20;
    c.sampling = Sampling::weak_hier;
    c.n_max = 6;
    c.m_rules = {2};
    c.theta_method = ThetaMethod::dinkelbach;
    configs.push_back(c);
  }
  int compared = 0, differing = 0;
  std::ostringstream log;
  for (std::size_t k = 0; k < configs.size(); k++)
  {
    std::vector<fs::path> dirs;
    for (int run = 0; run < 2; run++)
    {
      const fs::path dir = fs::temp_directory_path() /
                           ("rbhier_acceptance_" + std::to_string(k) + "_" + std::to_string(run));
      fs::remove_all(dir);
      ExperimentConfig c = configs[k];
      c.directory = dir.string();
      if (run_offline(c, false, log).exit_code != exit_ok ||
          run_online_eval(c, log).exit_code != exit_ok)
      {
        return {false, "experiment " + std::to_string(k) + " failed: " + log.str()};
      }
      dirs.push_back(dir);
    }
    for (const auto &e : fs::directory_iterator(dirs[0]))
    {
      const auto ext = e.path().extension();
      if (ext == ".csv" || ext == ".dat")
      {
        compared++;
        differing += slurp(e.path()) != slurp(dirs[1] / e.path().filename());
      }
    }
  }
  return {differing == 0 && compared > 0,
          std::to_string(compared) + " files compared, " + std::to_string(differing) +
            " differ"};
}

}  // namespace

int main(int argc, char **argv)
{
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
    {1, gramian_equivalence},    {2, hierarchical_sandwich}, {3, residual_sandwich},
    {4, dinkelbach_exact},       {5, taylor_finite_differences}, {6, scm_soundness},
    {7, greedy_decay},           {8, theta_improvement},     {9, saturation_failure},
    {10, online_efficiency},     {11, snapshot_reproduction}, {12, determinism}};
  std::vector<int> only;
  for (int i = 1; i < argc; i++)
  {
    only.push_back(std::atoi(argv[i]));
  }
  int failed = 0;
  for (const auto &[id, fn] : criteria)
  {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
    {
      continue;
    }
    Outcome o;
    const auto t0 = Clock::now();
    try
    {
      o = fn();
    }
    catch (const std::exception &e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << " [" << sci(since(t0)) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
