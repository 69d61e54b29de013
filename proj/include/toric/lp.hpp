#pragma once

#include <vector>

#include "toric/rational.hpp"

// Dense two-phase simplex over exact rationals. Sized for the regularity
// programs built by the subdivision module (tens of rows, a few hundred
// columns); Bland's rule keeps it cycle-free on degenerate instances.
namespace toric::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  Rational objective;
  RationalVector x;     // primal values, one per column
  RationalVector dual;  // simplex multipliers y with A^T y <= c at optimum
};

/// minimize c.x subject to A x = b, x >= 0.
Solution minimize(const RationalMatrix& a, const RationalVector& b, const RationalVector& c);

}  // namespace toric::lp
