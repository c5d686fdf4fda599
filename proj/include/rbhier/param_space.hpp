// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_PARAM_SPACE_HPP
#define RBHIER_PARAM_SPACE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>
#include "rbhier/types.hpp"

namespace rbhier
{

//
// The compact parameter box P = [lower, upper] ⊂ R^P.
//
class ParameterDomain
{
public:
  ParameterDomain(RealVector lower, RealVector upper);

  int dim() const { return static_cast<int>(lower_.size()); }
  const RealVector &lower() const { return lower_; }
  const RealVector &upper() const { return upper_; }

  // Closed-box membership with an absolute tolerance per coordinate.
  bool contains(const Parameter &mu, double tol = 0.0) const;
  Parameter midpoint() const { return 0.5 * (lower_ + upper_); }

private:
  RealVector lower_, upper_;
};

enum class SampleProvenance
{
  tensor_grid,
  random,
  explicit_list
};

//
// Ordered, duplicate-free list of parameters inside a domain. Immutable once built.
//
class SampleSet
{
public:
  // Validates membership and uniqueness.
  SampleSet(const ParameterDomain &domain, std::vector<Parameter> points,
            SampleProvenance provenance = SampleProvenance::explicit_list,
            std::uint64_t seed = 0);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Parameter &operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Parameter> &points() const { return points_; }
  const ParameterDomain &domain() const { return domain_; }
  SampleProvenance provenance() const { return provenance_; }
  std::uint64_t seed() const { return seed_; }

  // Points at the given indices, keeping this set's provenance.
  SampleSet subset(std::span<const std::size_t> indices) const;

  // Index of an exactly matching point, or -1.
  long find(const Parameter &mu) const;

private:
  ParameterDomain domain_;
  std::vector<Parameter> points_;
  SampleProvenance provenance_;
  std::uint64_t seed_;
};

SampleSet tensor_grid(const ParameterDomain &domain, std::span<const int> n_per_dim);
SampleSet random_sample(const ParameterDomain &domain, int n, std::uint64_t seed);

// A surviving subset P_i together with the positions of its points in the parent set.
struct Subset
{
  SampleSet points;
  std::vector<std::size_t> indices;
};

struct Partition
{
  std::vector<Subset> subsets;
  std::vector<std::size_t> excluded;
};

// Drops points with g(μ) ≤ tol·max g and returns the survivors as a single subset (L = 1).
Partition partition_positive(const SampleSet &set, std::span<const double> g_values,
                             double tol = 1e-12);

// Same filter applied to caller-supplied groups of indices (L = groups.size()). Groups that
// lose all of their points are dropped; if nothing survives an EmptyPartitionError is thrown.
Partition partition_positive(const SampleSet &set, std::span<const double> g_values,
                             const std::vector<std::vector<std::size_t>> &groups,
                             double tol = 1e-12);

// CSV with header mu_1,...,mu_P and one row per point.
void write_csv(std::ostream &os, const SampleSet &set);
std::vector<Parameter> read_parameter_csv(std::istream &is);

}  // namespace rbhier

#endif  // RBHIER_PARAM_SPACE_HPP
