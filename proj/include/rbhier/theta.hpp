// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_THETA_HPP
#define RBHIER_THETA_HPP

#include <functional>
#include <string>
#include <vector>
#include "rbhier/types.hpp"

namespace rbhier
{

//
// Coefficient function ϑ(μ) of one affine term together with its classical partial
// derivatives ∂^k ϑ / ∂μ_i^k, which drive the Taylor snapshot recursion.
//
class ThetaFunction
{
public:
  // fn(μ, direction, order); order 0 must return ϑ(μ) itself.
  using Evaluator = std::function<Scalar(const Parameter &, int, int)>;

  ThetaFunction(Evaluator fn, std::string description);

  Scalar operator()(const Parameter &mu) const { return fn_(mu, 0, 0); }
  Scalar derivative(const Parameter &mu, int direction, int order) const;
  const std::string &description() const { return description_; }

  static ThetaFunction constant(Scalar c);

  // ϑ(μ) = Σ_k coeffs[k] μ_component^k, with exact derivatives of every order.
  static ThetaFunction polynomial(int component, std::vector<Scalar> coeffs);

  // ϑ(μ) = μ_component.
  static ThetaFunction coordinate(int component);

private:
  Evaluator fn_;
  std::string description_;
};

// Evaluates Σ_q ϑ_q(μ) on a list, i.e. the coefficient vector (ϑ_1(μ), ..., ϑ_Q(μ)).
Vector evaluate(const std::vector<ThetaFunction> &thetas, const Parameter &mu);
Vector evaluate_derivative(const std::vector<ThetaFunction> &thetas, const Parameter &mu,
                           int direction, int order);

}  // namespace rbhier

#endif  // RBHIER_THETA_HPP
