#include "rptopic/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "rptopic/error.hpp"

namespace rptopic::lp {
namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }  // objective row
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
    }
    basis_[pr] = pc;
  }

  // Rebuilds every row from the original system for the current basis,
  // discarding rounding accumulated over earlier pivots.
  void refactor(const Eigen::MatrixXd& a0, const Eigen::VectorXd& b0, const Eigen::VectorXd& c) {
    const auto m = static_cast<Eigen::Index>(rows_);
    Eigen::MatrixXd basis_cols(m, m);
    Eigen::VectorXd cb(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      basis_cols.col(r) = a0.col(static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(r)]));
      cb(r) = c(static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(r)]));
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_cols);
    const Eigen::MatrixXd body = lu.solve(a0);
    const Eigen::VectorXd x = lu.solve(b0);
    const Eigen::VectorXd reduced = c.transpose() - cb.transpose() * body;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t col = 0; col < cols_; ++col) {
        at(r, col) = body(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col));
      }
      rhs(r) = x(static_cast<Eigen::Index>(r));
    }
    for (std::size_t col = 0; col < cols_; ++col) cost(col) = reduced(static_cast<Eigen::Index>(col));
    cost(cols_) = -cb.dot(x);
  }

  // Bland's entering rule on columns [0, allowed). Ratio ties go to the
  // largest pivot entry until a run of degenerate steps, then to the smallest
  // basis index so cycling stays impossible. Entries at or below pivot_tol are
  // never pivoted on. Returns false if unbounded; pivots counts the steps.
  bool optimize(std::size_t allowed, double tol, double pivot_tol, std::size_t* pivots = nullptr) {
    constexpr std::size_t kDegenerateRun = 50;
    std::size_t degenerate = 0;
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (cost(c) < -tol) {
          enter = c;
          break;
        }
      }
      if (enter == allowed) return true;
      double best = std::numeric_limits<double>::infinity();
      double largest = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a > pivot_tol) {
          best = std::min(best, rhs(r) / a);
          largest = std::max(largest, a);
        }
      }
      if (!std::isfinite(best)) return false;
      // Ties are taken within a window that moves no basic variable below -tol.
      const double window = tol / largest;
      std::size_t leave = rows_;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= pivot_tol || rhs(r) / a > best + window) continue;
        const bool better = degenerate < kDegenerateRun ? a > at(leave, enter) : basis_[r] < basis_[leave];
        if (leave == rows_ || better) leave = r;
      }
      degenerate = best <= window ? degenerate + 1 : 0;
      pivot(leave, enter);
      if (pivots) ++*pivots;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution minimize(const Problem& problem, double tol) {
  const std::size_t n = problem.objective.size();
  const std::size_t m = problem.constraints.size();

  // Nonnegative right-hand sides, and each row scaled to unit max entry so
  // one pivot tolerance fits every row.
  std::vector<Constraint> rows = problem.constraints;
  const double pivot_tol = std::max(tol, 1e-7);
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (auto& row : rows) {
    if (row.coeffs.size() != n) throw DimensionError("constraint width differs from objective");
    if (row.rhs < 0.0) {
      for (double& a : row.coeffs) a = -a;
      row.rhs = -row.rhs;
      if (row.relation == Relation::LessEqual) {
        row.relation = Relation::GreaterEqual;
      } else if (row.relation == Relation::GreaterEqual) {
        row.relation = Relation::LessEqual;
      }
    }
    double scale = std::fabs(row.rhs);
    for (double a : row.coeffs) scale = std::max(scale, std::fabs(a));
    if (scale > 0.0) {
      for (double& a : row.coeffs) a /= scale;
      row.rhs /= scale;
    }
    if (row.relation != Relation::Equal) ++slacks;
    if (row.relation != Relation::LessEqual) ++artificials;
  }

  const std::size_t first_slack = n;
  const std::size_t first_art = n + slacks;
  const std::size_t total = first_art + artificials;
  Tableau t(m, total);
  std::size_t next_slack = first_slack;
  std::size_t next_art = first_art;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = rows[r].coeffs[c];
    t.rhs(r) = rows[r].rhs;
    switch (rows[r].relation) {
      case Relation::LessEqual:
        t.at(r, next_slack) = 1.0;
        t.basis()[r] = next_slack++;
        break;
      case Relation::GreaterEqual:
        t.at(r, next_slack++) = -1.0;
        t.at(r, next_art) = 1.0;
        t.basis()[r] = next_art++;
        break;
      case Relation::Equal:
        t.at(r, next_art) = 1.0;
        t.basis()[r] = next_art++;
        break;
    }
  }

  Eigen::MatrixXd a0(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(total));
  Eigen::VectorXd b0(static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < total; ++c) a0(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t.at(r, c);
    b0(static_cast<Eigen::Index>(r)) = t.rhs(r);
  }
  // Optimize, then refactor and continue until a fresh tableau needs no pivots.
  auto solve_phase = [&](std::size_t allowed, const Eigen::VectorXd& c) {
    if (!t.optimize(allowed, tol, pivot_tol)) return false;
    for (int round = 0; round < 5; ++round) {
      t.refactor(a0, b0, c);
      std::size_t pivots = 0;
      if (!t.optimize(allowed, tol, pivot_tol, &pivots)) return false;
      if (pivots == 0) break;
    }
    return true;
  };

  // Phase one: minimize the sum of artificials.
  if (artificials > 0) {
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
    c1.tail(static_cast<Eigen::Index>(artificials)).setOnes();
    for (std::size_t c = first_art; c < total; ++c) t.cost(c) = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis()[r] >= first_art) {
        for (std::size_t c = 0; c <= total; ++c) t.cost(c) -= t.at(r, c);
      }
    }
    solve_phase(total, c1);
    if (-t.cost(total) > 1e3 * tol * (1.0 + static_cast<double>(m))) {
      return Solution{Status::Infeasible, 0.0, {}};
    }
    // Drive remaining zero-level artificials out of the basis. A row with no
    // usable pivot is redundant and is cleared so phase two cannot move it.
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis()[r] < first_art) continue;
      std::size_t best = first_art;
      for (std::size_t c = 0; c < first_art; ++c) {
        const double a = std::fabs(t.at(r, c));
        if (a > pivot_tol && (best == first_art || a > std::fabs(t.at(r, best)))) best = c;
      }
      t.rhs(r) = 0.0;
      if (best < first_art) {
        t.pivot(r, best);
      } else {
        for (std::size_t c = 0; c <= total; ++c) t.at(r, c) = 0.0;
      }
    }
  }

  // Phase two on the original objective; artificials may not re-enter.
  for (std::size_t c = 0; c <= total; ++c) t.cost(c) = 0.0;
  for (std::size_t c = 0; c < n; ++c) t.cost(c) = problem.objective[c];
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = t.basis()[r];
    const double cb = b < n ? problem.objective[b] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= total; ++c) t.cost(c) -= cb * t.at(r, c);
  }
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
  for (std::size_t c = 0; c < n; ++c) c2(static_cast<Eigen::Index>(c)) = problem.objective[c];
  if (!solve_phase(first_art, c2)) return Solution{Status::Unbounded, 0.0, {}};

  Solution sol;
  sol.status = Status::Optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < n) sol.x[t.basis()[r]] = t.rhs(r);
  }
  sol.value = 0.0;
  for (std::size_t c = 0; c < n; ++c) sol.value += problem.objective[c] * sol.x[c];

  // Reject answers the tableau arithmetic has drifted away from.
  for (const Constraint& row : rows) {
    double lhs = 0.0, magnitude = std::fabs(row.rhs);
    for (std::size_t c = 0; c < n; ++c) {
      lhs += row.coeffs[c] * sol.x[c];
      magnitude += std::fabs(row.coeffs[c] * sol.x[c]);
    }
    const double slack = 1e-7 * (1.0 + magnitude);
    const bool ok = row.relation == Relation::LessEqual      ? lhs <= row.rhs + slack
                    : row.relation == Relation::GreaterEqual ? lhs >= row.rhs - slack
                                                             : std::fabs(lhs - row.rhs) <= slack;
    if (!ok) throw NumericError("linear program solution violates a constraint");
  }
  for (double x : sol.x) {
    if (x < -1e-7) throw NumericError("linear program solution has a negative variable");
  }
  return sol;
}

}  // namespace rptopic::lp
