// SPDX-License-Identifier: Apache-2.0

#ifndef RBHIER_LP_HPP
#define RBHIER_LP_HPP

#include "rbhier/types.hpp"

namespace rbhier
{

//
//   minimize cᵀx  subject to  A x ≥ b,  lower ≤ x ≤ upper
//
// Dense two-phase tableau simplex with Bland's rule. Variables are rescaled to [0, 1] and
// constraint rows normalized to unit max-coefficient before pivoting. Meant for tens of
// variables and constraints.
//
struct BoxLp
{
  RealVector c;
  RealMatrix A;
  RealVector b;
  RealVector lower, upper;
};

enum class LpStatus
{
  optimal,
  infeasible
};

struct LpResult
{
  LpStatus status = LpStatus::infeasible;
  RealVector x;
  double objective = 0.0;
  int pivots = 0;
};

LpResult solve_box_lp(const BoxLp &lp);

}  // namespace rbhier

#endif  // RBHIER_LP_HPP
