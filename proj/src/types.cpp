// SPDX-License-Identifier: Apache-2.0

#include "rbhier/types.hpp"

#include <sstream>

namespace rbhier
{

std::string to_string(const Parameter &mu)
{
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index j = 0; j < mu.size(); j++)
  {
    os << (j ? ", " : "") << mu[j];
  }
  os << ')';
  return os.str();
}

std::string to_string(Field field)
{
  return field == Field::real ? "real" : "complex";
}

SingularSystemError::SingularSystemError(const std::string &what, Parameter mu, int dim)
  : Error(what + " at mu = " + to_string(mu) + " (dimension " + std::to_string(dim) + ")"),
    mu_(std::move(mu)), dim_(dim)
{
}

}  // namespace rbhier
