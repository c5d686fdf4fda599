// SPDX-License-Identifier: Apache-2.0

#include "rbhier/benchmarks.hpp"

#include <array>
#include <cmath>
#include "quadrature.hpp"

namespace rbhier
{

namespace
{

using Triplets = std::vector<Eigen::Triplet<Scalar>>;

void check_thermal_config(const ThermalBlockConfig &cfg)
{
  if (cfg.cells_per_side < 3 || cfg.cells_per_side % 3 != 0)
  {
    throw PreconditionError("thermal block: cells per side must be a positive multiple of 3 "
                            "so that subblock boundaries align with the mesh");
  }
}

// Triangles of cell (i, j) as local node triples (counter-clockwise).
template <typename Fn>
void for_each_triangle(int n, Fn &&fn)
{
  for (int j = 0; j < n; j++)
  {
    for (int i = 0; i < n; i++)
    {
      const int n00 = j * (n + 1) + i, n10 = n00 + 1, n01 = n00 + n + 1, n11 = n01 + 1;
      fn(i, j, std::array<int, 3>{n00, n10, n11});
      fn(i, j, std::array<int, 3>{n00, n11, n01});
    }
  }
}

}  // namespace

double thermal_block_conductivity(double x, double y, const Parameter &mu)
{
  const int bx = std::min(2, static_cast<int>(std::floor(3.0 * x)));
  const int by = std::min(2, static_cast<int>(std::floor(3.0 * y)));
  // Block index i = 3 bx + by + 1; odd i ⇔ bx + by even.
  return ((bx + by) % 2 == 0) ? mu[0] : mu[1];
}

SparseMatrix assemble_thermal_block_stiffness(const ThermalBlockConfig &cfg,
                                              const std::function<double(double, double)> &alpha)
{
  check_thermal_config(cfg);
  const int n = cfg.cells_per_side;
  const double h = 1.0 / n;
  // Nodes on the top edge (j = n) are the last n+1 indices and are eliminated.
  const int ndof = n * (n + 1);
  auto coord = [&](int node)
  { return std::array<double, 2>{(node % (n + 1)) * h, (node / (n + 1)) * h}; };

  Triplets trip;
  trip.reserve(static_cast<std::size_t>(n) * n * 18);
  for_each_triangle(n,
                    [&](int i, int j, const std::array<int, 3> &tri)
                    {
                      const double a = alpha((i + 0.5) * h, (j + 0.5) * h);
                      if (a == 0.0)
                      {
                        return;
                      }
                      std::array<std::array<double, 2>, 3> p;
                      for (int k = 0; k < 3; k++)
                      {
                        p[k] = coord(tri[k]);
                      }
                      const double det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) -
                                         (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
                      const double area = 0.5 * std::abs(det);
                      // ∇λ_k = (y_{k+1} - y_{k+2}, x_{k+2} - x_{k+1}) / det
                      std::array<std::array<double, 2>, 3> grad;
                      for (int k = 0; k < 3; k++)
                      {
                        const auto &p1 = p[(k + 1) % 3], &p2 = p[(k + 2) % 3];
                        grad[k] = {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det};
                      }
                      for (int r = 0; r < 3; r++)
                      {
                        if (tri[r] >= ndof)
                        {
                          continue;
                        }
                        for (int c = 0; c < 3; c++)
                        {
                          if (tri[c] >= ndof)
                          {
                            continue;
                          }
                          const double v = a * area *
                                           (grad[r][0] * grad[c][0] + grad[r][1] * grad[c][1]);
                          trip.emplace_back(tri[r], tri[c], v);
                        }
                      }
                    });
  SparseMatrix K(ndof, ndof);
  K.setFromTriplets(trip.begin(), trip.end());
  K.prune([](Eigen::Index, Eigen::Index, const Scalar &v) { return v != Scalar(0.0); });
  K.makeCompressed();
  return K;
}

TruthModel build_thermal_block(const ThermalBlockConfig &cfg)
{
  check_thermal_config(cfg);
  const int n = cfg.cells_per_side;
  const double h = 1.0 / n;
  const int ndof = n * (n + 1);

  auto block_indicator = [](bool odd)
  {
    return [odd](double x, double y)
    {
      Parameter e(2);
      e << 1.0, 0.0;
      const bool in_odd = thermal_block_conductivity(x, y, e) == 1.0;
      return in_odd == odd ? 1.0 : 0.0;
    };
  };

  TruthModel::Terms t;
  t.a.push_back(assemble_thermal_block_stiffness(cfg, block_indicator(true)));
  t.a.push_back(assemble_thermal_block_stiffness(cfg, block_indicator(false)));
  t.theta_a = {ThetaFunction::coordinate(0), ThetaFunction::coordinate(1)};

  // ∫_{bottom} v ds with unit flux; bottom nodes are indices 0..n.
  Vector F = Vector::Zero(ndof);
  for (int i = 0; i < n; i++)
  {
    F[i] += 0.5 * h;
    F[i + 1] += 0.5 * h;
  }
  t.f = {F};
  t.theta_f = {ThetaFunction::constant(1.0)};

  SparseMatrix G = t.a[0] + t.a[1];
  G.makeCompressed();
  t.gram = {G};
  t.theta_gram = {ThetaFunction::constant(1.0)};

  Parameter ref(2);
  ref << 1.0, 1.0;
  return TruthModel("thermal_block", Field::real, std::move(t), ref);
}

RealMatrix thermal_block_dof_coordinates(const ThermalBlockConfig &cfg)
{
  check_thermal_config(cfg);
  const int n = cfg.cells_per_side;
  const double h = 1.0 / n;
  RealMatrix xy(n * (n + 1), 2);
  for (int node = 0; node < n * (n + 1); node++)
  {
    xy(node, 0) = (node % (n + 1)) * h;
    xy(node, 1) = (node / (n + 1)) * h;
  }
  return xy;
}

TruthModel build_helmholtz_1d(const HelmholtzConfig &cfg)
{
  if (cfg.elements < 1 || cfg.degree < 1)
  {
    throw PreconditionError("helmholtz: need at least one element of degree >= 1");
  }
  const int E = cfg.elements, p = cfg.degree;
  const int ndof = E * p;  // global nodes E p + 1, node 0 (x = 0) eliminated
  const double h = 1.0 / E;
  const auto gll = detail::gauss_lobatto(p);
  const auto quad = detail::gauss_legendre(p + 2);

  // Reference element matrices on [-1, 1].
  RealMatrix Kref = RealMatrix::Zero(p + 1, p + 1), Mref = RealMatrix::Zero(p + 1, p + 1);
  RealVector lref = RealVector::Zero(p + 1);
  std::vector<double> phi, dphi;
  for (std::size_t k = 0; k < quad.nodes.size(); k++)
  {
    detail::lagrange_basis(gll.nodes, quad.nodes[k], phi, dphi);
    const double w = quad.weights[k];
    for (int a = 0; a <= p; a++)
    {
      lref[a] += w * phi[a];
      for (int b = 0; b <= p; b++)
      {
        Kref(a, b) += w * dphi[a] * dphi[b];
        Mref(a, b) += w * phi[a] * phi[b];
      }
    }
  }

  Triplets tk, tm;
  Vector load = Vector::Zero(ndof);
  for (int e = 0; e < E; e++)
  {
    for (int a = 0; a <= p; a++)
    {
      const int ga = e * p + a - 1;
      if (ga < 0)
      {
        continue;
      }
      load[ga] += 0.5 * h * lref[a];
      for (int b = 0; b <= p; b++)
      {
        const int gb = e * p + b - 1;
        if (gb < 0)
        {
          continue;
        }
        tk.emplace_back(ga, gb, (2.0 / h) * Kref(a, b));
        tm.emplace_back(ga, gb, 0.5 * h * Mref(a, b));
      }
    }
  }
  SparseMatrix K(ndof, ndof), M(ndof, ndof), B(ndof, ndof);
  K.setFromTriplets(tk.begin(), tk.end());
  M.setFromTriplets(tm.begin(), tm.end());
  B.insert(ndof - 1, ndof - 1) = 1.0;
  for (auto *S : {&K, &M, &B})
  {
    S->makeCompressed();
  }

  TruthModel::Terms t;
  t.a = {K, M, B};
  t.theta_a = {ThetaFunction::constant(1.0), ThetaFunction::polynomial(0, {0.0, 0.0, -1.0}),
               ThetaFunction::polynomial(0, {0.0, Scalar(0.0, 1.0)})};

  Vector robin = Vector::Zero(ndof);
  robin[ndof - 1] = 1.0;
  if (cfg.source != 0.0)
  {
    t.f.push_back(cfg.source * load);
    t.theta_f.push_back(ThetaFunction::constant(1.0));
  }
  if (cfg.robin != 0.0)
  {
    t.f.push_back(cfg.robin * robin);
    t.theta_f.push_back(ThetaFunction::constant(1.0));
  }
  if (t.f.empty())
  {
    t.f.push_back(Vector::Zero(ndof));
    t.theta_f.push_back(ThetaFunction::constant(1.0));
  }

  t.gram = {K, M};
  t.theta_gram = {ThetaFunction::constant(1.0), ThetaFunction::polynomial(0, {0.0, 0.0, 1.0})};

  Parameter ref(1);
  ref << cfg.reference_wavenumber;
  return TruthModel("helmholtz_1d", Field::complex, std::move(t), ref);
}

RealVector helmholtz_dof_coordinates(const HelmholtzConfig &cfg)
{
  const int E = cfg.elements, p = cfg.degree;
  const double h = 1.0 / E;
  const auto gll = detail::gauss_lobatto(p);
  RealVector x(E * p);
  for (int e = 0; e < E; e++)
  {
    for (int a = 1; a <= p; a++)
    {
      x[e * p + a - 1] = (e + 0.5 * (gll.nodes[a] + 1.0)) * h;
    }
  }
  return x;
}

}  // namespace rbhier
