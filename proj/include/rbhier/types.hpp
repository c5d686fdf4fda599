// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_TYPES_HPP
#define RBHIER_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rbhier
{

// All truth and reduced quantities are stored as complex numbers. Real problems (thermal
// block) simply carry a zero imaginary part.
using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Scalar>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// A point μ in the parameter box P ⊂ R^P.
using Parameter = Eigen::VectorXd;

enum class Field
{
  real,
  complex
};

std::string to_string(const Parameter &mu);
std::string to_string(Field field);

//
// Error hierarchy. Everything thrown by the library derives from rbhier::Error.
//
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Violated precondition of an operation (dimension mismatch, bad tolerance, ...).
class PreconditionError : public Error
{
public:
  using Error::Error;
};

// A truth or reduced linear system could not be solved at the given parameter.
class SingularSystemError : public Error
{
public:
  SingularSystemError(const std::string &what, Parameter mu, int dim);
  const Parameter &parameter() const { return mu_; }
  int dimension() const { return dim_; }

private:
  Parameter mu_;
  int dim_;
};

class EigenSolverError : public Error
{
public:
  using Error::Error;
};

// Every point of a partition was excluded by the positivity filter.
class EmptyPartitionError : public Error
{
public:
  using Error::Error;
};

// Θ ≥ 1: the hierarchical bound is not certified.
class SaturationError : public Error
{
public:
  using Error::Error;
};

// The inf-sup lower bound is unusable (nonpositive) or the SCM did not deliver one.
class StabilityBoundError : public Error
{
public:
  using Error::Error;
};

// A greedy run selected the same parameter twice.
class GreedyError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

}  // namespace rbhier

#endif  // RBHIER_TYPES_HPP
