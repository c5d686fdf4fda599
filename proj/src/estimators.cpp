// SPDX-License-Identifier: Apache-2.0

#include "rbhier/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace rbhier
{

ResidualData build_residual_data(const TruthModel &model, const ReducedBasis &basis)
{
  const int M = basis.size();
  const int qa = model.num_a(), qf = model.num_f();
  GramSolver gs(basis.gram());

  Matrix F(model.dofs(), qf), B(model.dofs(), qa * M);
  for (int q = 0; q < qf; q++)
  {
    F.col(q) = model.f_terms()[q];
  }
  for (int q = 0; q < qa; q++)
  {
    B.middleCols(q * M, M) = model.a_terms()[q] * basis.matrix();
  }
  const Matrix rF = gs.solve(F), rB = gs.solve(B);

  ResidualData rd;
  rd.basis_size = M;
  rd.ff = F.adjoint() * rF;
  rd.fa = F.adjoint() * rB;
  rd.aa = B.adjoint() * rB;
  rd.ff = 0.5 * (rd.ff + rd.ff.adjoint()).eval();
  rd.aa = 0.5 * (rd.aa + rd.aa.adjoint()).eval();
  rd.theta_a = model.theta_a();
  rd.theta_f = model.theta_f();
  rd.theta_gram = model.theta_gram();
  rd.sigma_ref = evaluate(model.theta_gram(), model.reference_parameter());
  return rd;
}

void save_residual_data(const ResidualData &rd, Container &c, const std::string &prefix)
{
  c.put_scalar(prefix + "/basis_size", rd.basis_size);
  c.put(prefix + "/ff", rd.ff);
  c.put(prefix + "/fa", rd.fa);
  c.put(prefix + "/aa", rd.aa);
  c.put(prefix + "/sigma_ref", Matrix(rd.sigma_ref));
}

ResidualData load_residual_data(const Container &c, const std::string &prefix,
                                const TruthModel &model)
{
  ResidualData rd;
  rd.basis_size = static_cast<int>(c.scalar(prefix + "/basis_size"));
  rd.ff = c.complex_matrix(prefix + "/ff");
  rd.fa = c.complex_matrix(prefix + "/fa");
  rd.aa = c.complex_matrix(prefix + "/aa");
  rd.sigma_ref = c.complex_matrix(prefix + "/sigma_ref").col(0);
  const Eigen::Index M = rd.basis_size;
  if (rd.ff.rows() != model.num_f() || rd.aa.rows() != model.num_a() * M ||
      rd.fa.cols() != model.num_a() * M || rd.sigma_ref.size() != model.num_gram())
  {
    throw IoError("load_residual_data: block sizes do not match the truth model");
  }
  rd.theta_a = model.theta_a();
  rd.theta_f = model.theta_f();
  rd.theta_gram = model.theta_gram();
  return rd;
}

double residual_dual_norm_sq_raw(const ResidualData &rd, const Parameter &mu,
                                 const Vector &coeffs)
{
  const int M = rd.basis_size, n = static_cast<int>(coeffs.size());
  if (n > M)
  {
    throw PreconditionError("residual_dual_norm: more coefficients than basis columns");
  }
  const Vector tf = evaluate(rd.theta_f, mu), ta = evaluate(rd.theta_a, mu);
  const int qa = static_cast<int>(ta.size());

  double value = tf.dot(rd.ff * tf).real();
  // w = (ϑ^a_q c_i) laid out q-major; only the leading n entries of each block are nonzero.
  Vector fw = Vector::Zero(tf.size());
  for (int q = 0; q < qa; q++)
  {
    fw += ta[q] * (rd.fa.middleCols(q * M, n) * coeffs);
  }
  value -= 2.0 * tf.dot(fw).real();
  for (int q = 0; q < qa; q++)
  {
    for (int p = 0; p < qa; p++)
    {
      const Scalar w = std::conj(ta[q]) * ta[p];
      value += (w * coeffs.dot(rd.aa.block(q * M, p * M, n, n) * coeffs)).real();
    }
  }
  return value;
}

double residual_dual_norm(const ResidualData &rd, const Parameter &mu, const Vector &coeffs)
{
  return std::sqrt(std::max(residual_dual_norm_sq_raw(rd, mu, coeffs), 0.0));
}

double frame_factor(const ResidualData &rd, const Parameter &mu)
{
  const Vector s = evaluate(rd.theta_gram, mu);
  double hi = 0.0;
  for (Eigen::Index r = 0; r < s.size(); r++)
  {
    hi = std::max(hi, s[r].real() / rd.sigma_ref[r].real());
  }
  return std::sqrt(hi);
}

double delta_std(const ResidualData &rd, const Parameter &mu, const Vector &coeffs,
                 double beta_lb)
{
  if (!(beta_lb > 0.0))
  {
    throw StabilityBoundError("delta_std: inf-sup lower bound " + std::to_string(beta_lb) +
                              " at " + to_string(mu) + " is not positive");
  }
  return frame_factor(rd, mu) * residual_dual_norm(rd, mu, coeffs) / beta_lb;
}

double delta_hier(const ReducedModel &rm, const Parameter &mu, const Vector &coeffs_n,
                  const Vector &coeffs_m)
{
  const Eigen::Index n = coeffs_n.size(), m = coeffs_m.size();
  if (n >= m)
  {
    throw PreconditionError("delta_hier: need N < M");
  }
  Vector d = -coeffs_m;
  d.head(n) += coeffs_n;
  const Matrix G = rm.gram(mu, static_cast<int>(m));
  return std::sqrt(std::max(d.dot(G * d).real(), 0.0));
}

double delta_hier_certified(double delta, double theta)
{
  if (!(theta >= 0.0) || !(theta < 1.0))
  {
    throw SaturationError("saturation constant " + std::to_string(theta) +
                          " is not in [0, 1); the hierarchical bound is not certified");
  }
  return delta / (1.0 - theta);
}

double truth_error(const TruthModel &model, const Parameter &mu, const Vector &truth,
                   const ReducedBasis &basis, const Vector &coeffs)
{
  return model.norm(truth - reconstruct(basis, coeffs), mu);
}

EffectivityRecord make_effectivity_record(int n, int m, const Parameter &mu, double error,
                                          double delta_std_value, double delta_hier_value,
                                          double theta, double rel_slack)
{
  EffectivityRecord r;
  r.n = n;
  r.m = m;
  r.mu = mu;
  r.error = error;
  r.delta_std = delta_std_value;
  r.delta_hier = delta_hier_value;
  r.delta_hier_cert = theta < 1.0 ? delta_hier_value / (1.0 - theta)
                                  : std::numeric_limits<double>::infinity();
  if (error > 0.0 && theta < 1.0)
  {
    r.eta = r.delta_hier_cert / error;
    const double upper = (1.0 + theta) / (1.0 - theta);
    r.within_bound = *r.eta >= 1.0 - rel_slack && *r.eta <= upper * (1.0 + rel_slack);
  }
  else
  {
    r.within_bound = false;
  }
  return r;
}

void write_effectivity_header(std::ostream &os, int parameter_dim)
{
  os << "N,M";
  for (int j = 1; j <= parameter_dim; j++)
  {
    os << ",mu_" << j;
  }
  os << ",err,delta_std,delta_hier,delta_hier_cert,eta,t_std,t_hier\n";
}

namespace
{

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string fmt_time(double t) { return t < 0.0 ? "NA" : fmt(t); }

}  // namespace

void write_effectivity_row(std::ostream &os, const EffectivityRecord &r)
{
  os << r.n << ',' << r.m;
  for (double m : r.mu)
  {
    os << ',' << fmt(m);
  }
  os << ',' << fmt(r.error) << ',' << fmt(r.delta_std) << ',' << fmt(r.delta_hier) << ','
     << fmt(r.delta_hier_cert) << ',' << (r.eta ? fmt(*r.eta) : "NA") << ','
     << fmt_time(r.t_std) << ',' << fmt_time(r.t_hier) << '\n';
}

}  // namespace rbhier
