#pragma once

#include <cstddef>
#include <vector>

// Dense two-phase simplex for small linear programs:
//   minimize c^T x  subject to  A x (<=, =, >=) b,  x >= 0.
// Bland's rule throughout, so degenerate problems terminate.
namespace rptopic::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct Problem {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

Solution minimize(const Problem& problem, double tol = 1e-10);

}  // namespace rptopic::lp
