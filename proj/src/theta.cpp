// SPDX-License-Identifier: Apache-2.0

#include "rbhier/theta.hpp"

#include <sstream>

namespace rbhier
{

ThetaFunction::ThetaFunction(Evaluator fn, std::string description)
  : fn_(std::move(fn)), description_(std::move(description))
{
}

Scalar ThetaFunction::derivative(const Parameter &mu, int direction, int order) const
{
  if (order < 0 || direction < 0 || direction >= mu.size())
  {
    throw PreconditionError("ThetaFunction::derivative: invalid direction or order");
  }
  return fn_(mu, order == 0 ? 0 : direction, order);
}

ThetaFunction ThetaFunction::constant(Scalar c)
{
  std::ostringstream os;
  os << "const" << c;
  return ThetaFunction([c](const Parameter &, int, int order)
                       { return order == 0 ? c : Scalar(0.0); },
                       os.str());
}

ThetaFunction ThetaFunction::polynomial(int component, std::vector<Scalar> coeffs)
{
  if (component < 0)
  {
    throw PreconditionError("ThetaFunction::polynomial: negative component");
  }
  std::ostringstream os;
  os << "poly(mu_" << component + 1;
  for (const auto &c : coeffs)
  {
    os << ',' << c;
  }
  os << ')';
  return ThetaFunction(
    [component, coeffs = std::move(coeffs)](const Parameter &mu, int direction, int order)
    {
      if (order > 0 && direction != component)
      {
        return Scalar(0.0);
      }
      const double x = mu[component];
      Scalar value = 0.0;
      // Horner on the order-th derivative: Σ_k c_k k!/(k-order)! x^(k-order).
      for (int k = static_cast<int>(coeffs.size()) - 1; k >= order; k--)
      {
        double falling = 1.0;
        for (int m = 0; m < order; m++)
        {
          falling *= static_cast<double>(k - m);
        }
        value = value * x + coeffs[k] * falling;
      }
      return value;
    },
    os.str());
}

ThetaFunction ThetaFunction::coordinate(int component)
{
  return polynomial(component, {0.0, 1.0});
}

Vector evaluate(const std::vector<ThetaFunction> &thetas, const Parameter &mu)
{
  Vector out(thetas.size());
  for (std::size_t q = 0; q < thetas.size(); q++)
  {
    out[q] = thetas[q](mu);
  }
  return out;
}

Vector evaluate_derivative(const std::vector<ThetaFunction> &thetas, const Parameter &mu,
                           int direction, int order)
{
  Vector out(thetas.size());
  for (std::size_t q = 0; q < thetas.size(); q++)
  {
    out[q] = thetas[q].derivative(mu, direction, order);
  }
  return out;
}

}  // namespace rbhier
