// SPDX-License-Identifier: Apache-2.0

#include "rbhier/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace rbhier
{

ParameterDomain::ParameterDomain(RealVector lower, RealVector upper)
  : lower_(std::move(lower)), upper_(std::move(upper))
{
  if (lower_.size() < 1 || lower_.size() != upper_.size())
  {
    throw PreconditionError("ParameterDomain: bounds must have equal, positive length");
  }
  for (Eigen::Index j = 0; j < lower_.size(); j++)
  {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]) || !(lower_[j] < upper_[j]))
    {
      throw PreconditionError("ParameterDomain: need finite bounds with lower < upper");
    }
  }
}

bool ParameterDomain::contains(const Parameter &mu, double tol) const
{
  if (mu.size() != lower_.size())
  {
    return false;
  }
  for (Eigen::Index j = 0; j < mu.size(); j++)
  {
    if (mu[j] < lower_[j] - tol || mu[j] > upper_[j] + tol)
    {
      return false;
    }
  }
  return true;
}

namespace
{

struct LexLess
{
  bool operator()(const Parameter &a, const Parameter &b) const
  {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
  }
};

}  // namespace

SampleSet::SampleSet(const ParameterDomain &domain, std::vector<Parameter> points,
                     SampleProvenance provenance, std::uint64_t seed)
  : domain_(domain), points_(std::move(points)), provenance_(provenance), seed_(seed)
{
  std::map<Parameter, std::size_t, LexLess> seen;
  for (std::size_t i = 0; i < points_.size(); i++)
  {
    if (!domain_.contains(points_[i]))
    {
      throw PreconditionError("SampleSet: point " + to_string(points_[i]) +
                              " outside the parameter domain");
    }
    if (!seen.emplace(points_[i], i).second)
    {
      throw PreconditionError("SampleSet: duplicate point " + to_string(points_[i]));
    }
  }
}

SampleSet SampleSet::subset(std::span<const std::size_t> indices) const
{
  std::vector<Parameter> pts;
  pts.reserve(indices.size());
  for (auto i : indices)
  {
    pts.push_back(points_.at(i));
  }
  return SampleSet(domain_, std::move(pts), provenance_, seed_);
}

long SampleSet::find(const Parameter &mu) const
{
  for (std::size_t i = 0; i < points_.size(); i++)
  {
    if (points_[i].size() == mu.size() && points_[i] == mu)
    {
      return static_cast<long>(i);
    }
  }
  return -1;
}

SampleSet tensor_grid(const ParameterDomain &domain, std::span<const int> n_per_dim)
{
  const int P = domain.dim();
  if (static_cast<int>(n_per_dim.size()) != P)
  {
    throw PreconditionError("tensor_grid: n_per_dim has " + std::to_string(n_per_dim.size()) +
                            " entries for a " + std::to_string(P) + "-dimensional domain");
  }
  std::size_t total = 1;
  for (int n : n_per_dim)
  {
    if (n < 2)
    {
      throw PreconditionError("tensor_grid: need at least 2 points per dimension");
    }
    total *= static_cast<std::size_t>(n);
  }

  // 1-D grids; the last point is set to the bound exactly.
  std::vector<std::vector<double>> axes(P);
  for (int j = 0; j < P; j++)
  {
    const double a = domain.lower()[j], b = domain.upper()[j];
    const int n = n_per_dim[j];
    axes[j].resize(n);
    for (int k = 0; k < n; k++)
    {
      axes[j][k] = (k == n - 1) ? b : a + (b - a) * static_cast<double>(k) / (n - 1);
    }
  }

  // Lexicographic order: the first coordinate varies slowest.
  std::vector<Parameter> pts;
  pts.reserve(total);
  std::vector<int> idx(P, 0);
  for (std::size_t c = 0; c < total; c++)
  {
    Parameter mu(P);
    for (int j = 0; j < P; j++)
    {
      mu[j] = axes[j][idx[j]];
    }
    pts.push_back(std::move(mu));
    for (int j = P - 1; j >= 0; j--)
    {
      if (++idx[j] < n_per_dim[j])
      {
        break;
      }
      idx[j] = 0;
    }
  }
  return SampleSet(domain, std::move(pts), SampleProvenance::tensor_grid);
}

SampleSet random_sample(const ParameterDomain &domain, int n, std::uint64_t seed)
{
  if (n < 1)
  {
    throw PreconditionError("random_sample: n must be positive");
  }
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Parameter> pts;
  pts.reserve(n);
  while (static_cast<int>(pts.size()) < n)
  {
    Parameter mu(domain.dim());
    for (int j = 0; j < domain.dim(); j++)
    {
      mu[j] = domain.lower()[j] + (domain.upper()[j] - domain.lower()[j]) * unit(engine);
    }
    // Collisions are practically impossible; redraw if one happens.
    if (std::none_of(pts.begin(), pts.end(), [&](const Parameter &p) { return p == mu; }))
    {
      pts.push_back(std::move(mu));
    }
  }
  return SampleSet(domain, std::move(pts), SampleProvenance::random, seed);
}

Partition partition_positive(const SampleSet &set, std::span<const double> g_values,
                             double tol)
{
  std::vector<std::size_t> all(set.size());
  for (std::size_t i = 0; i < all.size(); i++)
  {
    all[i] = i;
  }
  return partition_positive(set, g_values, {all}, tol);
}

Partition partition_positive(const SampleSet &set, std::span<const double> g_values,
                             const std::vector<std::vector<std::size_t>> &groups, double tol)
{
  if (g_values.size() != set.size())
  {
    throw PreconditionError("partition_positive: g_values not aligned with the sample set");
  }
  if (!(tol > 0.0))
  {
    throw PreconditionError("partition_positive: tol must be positive");
  }
  double gmax = 0.0;
  for (double g : g_values)
  {
    if (g < 0.0 || !std::isfinite(g))
    {
      throw PreconditionError("partition_positive: g must be finite and nonnegative");
    }
    gmax = std::max(gmax, g);
  }
  const double cut = tol * gmax;

  Partition part;
  std::vector<char> assigned(set.size(), 0);
  for (const auto &group : groups)
  {
    std::vector<std::size_t> keep;
    for (auto i : group)
    {
      if (i >= set.size())
      {
        throw PreconditionError("partition_positive: group index out of range");
      }
      if (assigned[i]++)
      {
        throw PreconditionError("partition_positive: groups must be disjoint");
      }
      if (g_values[i] > cut)
      {
        keep.push_back(i);
      }
      else
      {
        part.excluded.push_back(i);
      }
    }
    if (!keep.empty())
    {
      part.subsets.push_back({set.subset(keep), std::move(keep)});
    }
  }
  std::sort(part.excluded.begin(), part.excluded.end());
  if (part.subsets.empty())
  {
    throw EmptyPartitionError("partition_positive: every point has g <= tol; Theta undefined");
  }
  return part;
}

void write_csv(std::ostream &os, const SampleSet &set)
{
  const int P = set.domain().dim();
  for (int j = 0; j < P; j++)
  {
    os << (j ? "," : "") << "mu_" << j + 1;
  }
  os << '\n';
  const auto prec = os.precision(17);
  for (const auto &mu : set.points())
  {
    for (int j = 0; j < P; j++)
    {
      os << (j ? "," : "") << mu[j];
    }
    os << '\n';
  }
  os.precision(prec);
}

std::vector<Parameter> read_parameter_csv(std::istream &is)
{
  std::string line;
  if (!std::getline(is, line))
  {
    throw IoError("read_parameter_csv: missing header");
  }
  const auto P = std::count(line.begin(), line.end(), ',') + 1;
  std::vector<Parameter> pts;
  while (std::getline(is, line))
  {
    if (line.empty())
    {
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    Parameter mu(P);
    for (long j = 0; j < P; j++)
    {
      if (!(row >> mu[j]))
      {
        throw IoError("read_parameter_csv: malformed row '" + line + "'");
      }
    }
    pts.push_back(std::move(mu));
  }
  return pts;
}

}  // namespace rbhier
