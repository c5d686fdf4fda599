// SPDX-License-Identifier: Apache-2.0

#include "rbhier/scm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include "rbhier/lp.hpp"

namespace rbhier
{

double min_theta_lower_bound(const TruthModel &model, const Parameter &mu,
                             const Parameter &mu_ref, double beta_ref)
{
  const Vector t = evaluate(model.theta_a(), mu), t_ref = evaluate(model.theta_a(), mu_ref);
  double ratio = std::numeric_limits<double>::infinity();
  for (Eigen::Index q = 0; q < t.size(); q++)
  {
    if (t[q].imag() != 0.0 || t_ref[q].imag() != 0.0 || !(t[q].real() > 0.0) ||
        !(t_ref[q].real() > 0.0))
    {
      throw PreconditionError("min_theta_lower_bound: coefficient " + std::to_string(q) +
                              " is not real and positive; the bound does not apply");
    }
    ratio = std::min(ratio, t[q].real() / t_ref[q].real());
  }
  return beta_ref * ratio;
}

ScmState::ScmState(ScmConfig cfg, std::vector<ThetaFunction> theta_a, RealVector box_lower,
                   RealVector box_upper, std::vector<Parameter> positivity_set)
  : cfg_(std::move(cfg)), theta_a_(std::move(theta_a)), box_lo_(std::move(box_lower)),
    box_hi_(std::move(box_upper)), positivity_(std::move(positivity_set))
{
  const auto q = static_cast<Eigen::Index>(theta_a_.size());
  const Eigen::Index nvar = cfg_.mode == ScmMode::coercive ? q : q * q;
  if (box_lo_.size() != nvar || box_hi_.size() != nvar)
  {
    throw PreconditionError("ScmState: box dimension does not match the SCM mode");
  }
}

RealVector ScmState::coefficients(const Parameter &mu) const
{
  const Vector t = evaluate(theta_a_, mu);
  const Eigen::Index Q = t.size();
  if (cfg_.mode == ScmMode::coercive)
  {
    return t.real();
  }
  RealVector c(Q * Q);
  Eigen::Index k = 0;
  for (Eigen::Index q = 0; q < Q; q++)
  {
    c[k++] = std::norm(t[q]);
  }
  for (Eigen::Index q = 0; q < Q; q++)
  {
    for (Eigen::Index p = q + 1; p < Q; p++)
    {
      const Scalar w = std::conj(t[q]) * t[p];
      c[k++] = 2.0 * w.real();
      c[k++] = -2.0 * w.imag();
    }
  }
  return c;
}

long ScmState::constraint_index(const Parameter &mu) const
{
  for (std::size_t k = 0; k < c_mu_.size(); k++)
  {
    if (c_mu_[k].size() == mu.size() && c_mu_[k] == mu)
    {
      return static_cast<long>(k);
    }
  }
  return -1;
}

std::vector<std::size_t> ScmState::nearest(const std::vector<Parameter> &pts,
                                           const Parameter &mu, int count) const
{
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto take = std::min<std::size_t>(std::max(count, 0), pts.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(take), idx.end(),
                    [&](std::size_t a, std::size_t b)
                    {
                      const double da = (pts[a] - mu).squaredNorm();
                      const double db = (pts[b] - mu).squaredNorm();
                      return da < db || (da == db && a < b);
                    });
  idx.resize(take);
  return idx;
}

double ScmState::stability_lower(const Parameter &mu) const
{
  if (const long k = constraint_index(mu); k >= 0)
  {
    return c_val_[k];
  }
  const auto near_c = nearest(c_mu_, mu, cfg_.m_alpha);
  const auto near_p = nearest(positivity_, mu, cfg_.m_plus);
  BoxLp lp;
  lp.c = coefficients(mu);
  lp.lower = box_lo_;
  lp.upper = box_hi_;
  lp.A.resize(static_cast<Eigen::Index>(near_c.size() + near_p.size()), lp.c.size());
  lp.b.resize(lp.A.rows());
  Eigen::Index r = 0;
  for (auto k : near_c)
  {
    lp.A.row(r) = coefficients(c_mu_[k]).transpose();
    lp.b[r++] = c_val_[k];
  }
  for (auto k : near_p)
  {
    lp.A.row(r) = coefficients(positivity_[k]).transpose();
    lp.b[r++] = 0.0;
  }
  const auto res = solve_box_lp(lp);
  if (res.status != LpStatus::optimal)
  {
    // Box-only bound: every coefficient picks its worst box end.
    double v = 0.0;
    for (Eigen::Index j = 0; j < lp.c.size(); j++)
    {
      v += std::min(lp.c[j] * box_lo_[j], lp.c[j] * box_hi_[j]);
    }
    return v;
  }
  return res.objective;
}

double ScmState::stability_upper(const Parameter &mu) const
{
  if (const long k = constraint_index(mu); k >= 0)
  {
    return c_val_[k];
  }
  const RealVector c = coefficients(mu);
  double ub = std::numeric_limits<double>::infinity();
  for (const auto &y : c_y_)
  {
    ub = std::min(ub, c.dot(y));
  }
  return ub;
}

double ScmState::lower_bound(const Parameter &mu) const
{
  const double s = stability_lower(mu);
  return cfg_.mode == ScmMode::coercive ? s : std::sqrt(std::max(s, 0.0));
}

double ScmState::upper_bound(const Parameter &mu) const
{
  const double s = stability_upper(mu);
  return cfg_.mode == ScmMode::coercive ? s : std::sqrt(std::max(s, 0.0));
}

double ScmState::gap(const Parameter &mu) const
{
  const double lb = stability_lower(mu), ub = stability_upper(mu);
  if (!std::isfinite(ub) || !(ub > 0.0))
  {
    return 1.0;
  }
  if (cfg_.mode == ScmMode::coercive)
  {
    const double r = std::max(lb, 0.0) / ub;
    return 1.0 - r * r;
  }
  return 1.0 - std::max(lb, 0.0) / ub;
}

void ScmState::add_constraint(const Parameter &mu, double exact, RealVector y)
{
  if (y.size() != num_variables())
  {
    throw PreconditionError("ScmState::add_constraint: variable vector has wrong size");
  }
  c_mu_.push_back(mu);
  c_val_.push_back(exact);
  c_y_.push_back(std::move(y));
}

void ScmState::save(Container &c, const std::string &prefix) const
{
  auto stack = [](const std::vector<RealVector> &cols, Eigen::Index rows)
  {
    RealMatrix m(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); k++)
    {
      m.col(static_cast<Eigen::Index>(k)) = cols[k];
    }
    return m;
  };
  const Eigen::Index P = positivity_.empty() ? 0 : positivity_[0].size();
  c.put_scalar(prefix + "/mode", cfg_.mode == ScmMode::coercive ? 0.0 : 1.0);
  RealVector conf(4);
  conf << cfg_.m_alpha, cfg_.m_plus, cfg_.tol, cfg_.k_max;
  c.put(prefix + "/config", RealMatrix(conf));
  c.put(prefix + "/box_lower", RealMatrix(box_lo_));
  c.put(prefix + "/box_upper", RealMatrix(box_hi_));
  c.put(prefix + "/positivity", stack(positivity_, P));
  c.put(prefix + "/constraint_mu", stack(c_mu_, P));
  c.put(prefix + "/constraint_y", stack(c_y_, num_variables()));
  c.put(prefix + "/constraint_value",
        RealMatrix(Eigen::Map<const RealVector>(c_val_.data(),
                                                static_cast<Eigen::Index>(c_val_.size()))));
  RealMatrix hist(2 + P, static_cast<Eigen::Index>(history_.size()));
  for (std::size_t k = 0; k < history_.size(); k++)
  {
    hist(0, k) = history_[k].k;
    hist(1, k) = history_[k].gap;
    hist.col(k).tail(P) = history_[k].mu;
  }
  c.put(prefix + "/history", hist);
  c.put_scalar(prefix + "/converged", converged_ ? 1.0 : 0.0);
}

ScmState ScmState::load(const Container &c, const std::string &prefix, const TruthModel &model)
{
  auto unstack = [](const RealMatrix &m)
  {
    std::vector<RealVector> out;
    for (Eigen::Index k = 0; k < m.cols(); k++)
    {
      out.push_back(m.col(k));
    }
    return out;
  };
  ScmConfig cfg;
  cfg.mode = c.scalar(prefix + "/mode") == 0.0 ? ScmMode::coercive : ScmMode::infsup_squared;
  const RealMatrix &conf = c.real_matrix(prefix + "/config");
  cfg.m_alpha = static_cast<int>(conf(0));
  cfg.m_plus = static_cast<int>(conf(1));
  cfg.tol = conf(2);
  cfg.k_max = static_cast<int>(conf(3));
  ScmState s(cfg, model.theta_a(), c.real_matrix(prefix + "/box_lower").col(0),
             c.real_matrix(prefix + "/box_upper").col(0),
             unstack(c.real_matrix(prefix + "/positivity")));
  const auto mus = unstack(c.real_matrix(prefix + "/constraint_mu"));
  const auto ys = unstack(c.real_matrix(prefix + "/constraint_y"));
  const RealMatrix &vals = c.real_matrix(prefix + "/constraint_value");
  for (std::size_t k = 0; k < mus.size(); k++)
  {
    s.add_constraint(mus[k], vals(static_cast<Eigen::Index>(k)), ys[k]);
  }
  const RealMatrix &hist = c.real_matrix(prefix + "/history");
  const Eigen::Index P = hist.rows() - 2;
  for (Eigen::Index k = 0; k < hist.cols(); k++)
  {
    s.record({static_cast<int>(hist(0, k)), hist.col(k).tail(P), hist(1, k)});
  }
  s.set_converged(c.scalar(prefix + "/converged") != 0.0);
  return s;
}

namespace
{

// Real and imaginary parts of z_qp = (A_q v)ᴴ G⁻¹ (A_p v), laid out like
// ScmState::coefficients; v is G-normalized.
RealVector squared_variables(const TruthModel &model, const GramSolver &gs, const Vector &v)
{
  const auto Q = static_cast<Eigen::Index>(model.num_a());
  Matrix W(v.size(), Q);
  for (Eigen::Index q = 0; q < Q; q++)
  {
    W.col(q) = model.a_terms()[q] * v;
  }
  const Matrix Z = W.adjoint() * gs.solve(W);
  RealVector y(Q * Q);
  Eigen::Index k = 0;
  for (Eigen::Index q = 0; q < Q; q++)
  {
    y[k++] = Z(q, q).real();
  }
  for (Eigen::Index q = 0; q < Q; q++)
  {
    for (Eigen::Index p = q + 1; p < Q; p++)
    {
      y[k++] = Z(q, p).real();
      y[k++] = Z(q, p).imag();
    }
  }
  return y;
}

}  // namespace

ScmSample scm_exact_sample(const TruthModel &model, const Parameter &mu, const ScmConfig &cfg)
{
  const SparseMatrix G = model.reference_gram();
  ScmSample out;
  if (cfg.mode == ScmMode::coercive)
  {
    const SparseMatrix A = model.assemble_operator(mu);
    const SparseMatrix H = 0.5 * (A + SparseMatrix(A.adjoint()));
    const auto ext = hermitian_pencil_extremes(H, G, cfg.route, cfg.eigen);
    out.value = ext.lower;
    out.y.resize(model.num_a());
    for (int q = 0; q < model.num_a(); q++)
    {
      out.y[q] = ext.lower_mode.dot(model.a_terms()[q] * ext.lower_mode).real();
    }
  }
  else
  {
    const auto st = inf_sup_only(model.assemble_operator(mu), G, cfg.route, cfg.eigen);
    out.value = st.beta * st.beta;
    out.y = squared_variables(model, GramSolver(G), st.beta_mode);
  }
  return out;
}

ScmState scm_offline(const TruthModel &model, const SampleSet &train, const ScmConfig &cfg)
{
  if (train.empty())
  {
    throw PreconditionError("scm_offline: empty training set");
  }
  if (cfg.k_max < 1 || cfg.m_alpha < 1 || cfg.m_plus < 0 || !(cfg.tol > 0.0))
  {
    throw PreconditionError("scm_offline: invalid configuration");
  }
  const SparseMatrix G = model.reference_gram();
  const int Q = model.num_a();

  // Variable boxes from the extreme eigenvalues of each affine term. They are computed once,
  // so the dense route is preferred whenever it is allowed.
  const EigenRoute box_route =
    cfg.route == EigenRoute::iterative && model.dofs() > cfg.eigen.dense_limit
      ? EigenRoute::iterative
      : (model.dofs() <= cfg.eigen.dense_limit ? EigenRoute::dense : cfg.route);
  RealVector lo, hi;
  if (cfg.mode == ScmMode::coercive)
  {
    lo.resize(Q);
    hi.resize(Q);
    for (int q = 0; q < Q; q++)
    {
      const auto &Aq = model.a_terms()[q];
      const SparseMatrix H = 0.5 * (Aq + SparseMatrix(Aq.adjoint()));
      const auto ext = hermitian_pencil_extremes(H, G, box_route, cfg.eigen);
      lo[q] = ext.lower;
      hi[q] = ext.upper;
    }
  }
  else
  {
    RealVector gamma(Q);
    for (int q = 0; q < Q; q++)
    {
      const auto &Aq = model.a_terms()[q];
      const SparseMatrix D = Aq - SparseMatrix(Aq.adjoint());
      if (D.norm() > 1e-13 * Aq.norm())
      {
        throw PreconditionError("scm_offline: infsup_squared boxes need Hermitian A_q");
      }
      const auto ext = hermitian_pencil_extremes(Aq, G, box_route, cfg.eigen);
      gamma[q] = std::max(std::abs(ext.lower), std::abs(ext.upper));
    }
    lo.resize(Q * Q);
    hi.resize(Q * Q);
    Eigen::Index k = 0;
    for (int q = 0; q < Q; q++, k++)
    {
      lo[k] = 0.0;
      hi[k] = gamma[q] * gamma[q];
    }
    for (int q = 0; q < Q; q++)
    {
      for (int p = q + 1; p < Q; p++)
      {
        for (int part = 0; part < 2; part++, k++)
        {
          hi[k] = gamma[q] * gamma[p];
          lo[k] = -hi[k];
        }
      }
    }
  }

  ScmState state(cfg, model.theta_a(), lo, hi, train.points());
  std::size_t next = 0;
  for (int k = 1; k <= cfg.k_max; k++)
  {
    const Parameter mu = train[next];
    auto sample = scm_exact_sample(model, mu, cfg);
    state.add_constraint(mu, sample.value, std::move(sample.y));

    double worst = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < train.size(); i++)
    {
      const double g = state.gap(train[i]);
      if (g > worst)
      {
        worst = g;
        arg = i;
      }
    }
    state.record({k, mu, worst});
    if (worst <= cfg.tol)
    {
      state.set_converged(true);
      break;
    }
    next = arg;
  }
  return state;
}

double scm_lower_bound(const ScmState &state, const Parameter &mu)
{
  return state.lower_bound(mu);
}

double scm_upper_bound(const ScmState &state, const Parameter &mu)
{
  return state.upper_bound(mu);
}

double to_parameter_frame_lower(const TruthModel &model, const Parameter &mu, double beta_ref)
{
  return beta_ref / model.gram_bounds(mu).upper;
}

double to_parameter_frame_upper(const TruthModel &model, const Parameter &mu, double beta_ref)
{
  return beta_ref / model.gram_bounds(mu).lower;
}

void write_scm_history(std::ostream &os, const ScmState &state, int parameter_dim)
{
  os << "K";
  for (int j = 1; j <= parameter_dim; j++)
  {
    os << ",mu_" << j;
  }
  os << ",gap\n";
  char buf[32];
  for (const auto &e : state.history())
  {
    os << e.k;
    for (double m : e.mu)
    {
      std::snprintf(buf, sizeof buf, "%.12e", m);
      os << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.12e", e.gap);
    os << ',' << buf << '\n';
  }
}

}  // namespace rbhier
