#include "rptopic/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rptopic/error.hpp"
#include "rptopic/lp.hpp"
#include "rptopic/regression.hpp"

namespace rptopic {

double simplicial_constant(const Eigen::MatrixXd& b) {
  const Eigen::Index k = b.rows();
  if (k == 0) throw DimensionError("empty matrix");
  if (k == 1) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < k; ++r) {
    Eigen::MatrixXd others(k - 1, b.cols());
    for (Eigen::Index i = 0, o = 0; i < k; ++i) {
      if (i != r) others.row(o++) = b.row(i);
    }
    const Eigen::VectorXd target = b.row(r).transpose();
    const SimplexLeastSquares solver(std::move(others), 1e-10);
    const SimplexWeights w = solver.solve({target.data(), static_cast<std::size_t>(target.size())});
    best = std::min(best, std::sqrt(std::max(w.residual, 0.0)));
  }
  return best;
}

double affine_constant(const Eigen::MatrixXd& b) {
  const Eigen::Index k = b.rows();
  if (k < 2) throw DimensionError("affine constant needs at least two rows");
  // Orthonormal basis of the zero-sum hyperplane: trailing Householder columns.
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(k, 1));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
  const Eigen::MatrixXd vb = q.rightCols(k - 1).transpose() * b;
  if (vb.rows() > vb.cols()) return 0.0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(vb);
  return svd.singularValues().minCoeff();
}

double min_eigenvalue(const Eigen::MatrixXd& b, bool* symmetrized) {
  if (b.rows() != b.cols() || b.rows() == 0) throw DimensionError("eigenvalue needs a square matrix");
  const double asym = (b - b.transpose()).cwiseAbs().maxCoeff();
  const bool sym = asym > 1e-9;
  if (symmetrized != nullptr) *symmetrized = sym;
  const Eigen::MatrixXd s = 0.5 * (b + b.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double diag_dominance_constant(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols()) throw DimensionError("diagonal dominance needs a square matrix");
  if (b.rows() < 2) throw DimensionError("diagonal dominance needs at least two rows");
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (i != j) best = std::min(best, b(i, i) - b(i, j));
    }
  }
  return best;
}

SeparabilityResult separability_check(const Eigen::MatrixXd& beta, double tol) {
  SeparabilityResult out;
  out.novel_sets.resize(static_cast<std::size_t>(beta.cols()));
  for (Eigen::Index i = 0; i < beta.rows(); ++i) {
    Eigen::Index support = -1;
    int count = 0;
    for (Eigen::Index k = 0; k < beta.cols(); ++k) {
      if (beta(i, k) > tol) {
        support = k;
        ++count;
      }
    }
    if (count == 1) out.novel_sets[static_cast<std::size_t>(support)].push_back(static_cast<std::size_t>(i));
  }
  out.separable = std::all_of(out.novel_sets.begin(), out.novel_sets.end(),
                              [](const auto& s) { return !s.empty(); });
  return out;
}

bool irreducibility_check(const Eigen::MatrixXd& beta, double tol) {
  const Eigen::Index w = beta.rows();
  const Eigen::Index k = beta.cols();
  if (k == 0) throw DimensionError("matrix has no columns");
  if ((beta.array() < 0.0).any()) throw Error("irreducibility needs a nonnegative matrix");
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!(beta.col(j).sum() > 0.0)) throw DegenerateTopicError(static_cast<std::size_t>(j));
  }
  const auto nk = static_cast<std::size_t>(k);

  // c_j = p_j - n_j for j != t, and c_t = s - 1 with s >= 0. Variables are laid
  // out as [p (k-1), n (k-1), s]. The bound c_t >= -1 keeps the LP bounded;
  // the certificate is scale invariant so any negative optimum is conclusive.
  for (Eigen::Index t = 0; t < k; ++t) {
    lp::Problem prob;
    const std::size_t nv = 2 * (nk - 1) + 1;
    prob.objective.assign(nv, 0.0);
    prob.objective[nv - 1] = 1.0;
    for (Eigen::Index i = 0; i < w; ++i) {
      lp::Constraint c;
      c.coeffs.assign(nv, 0.0);
      std::size_t v = 0;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (j == t) continue;
        c.coeffs[v] = beta(i, j);
        c.coeffs[nk - 1 + v] = -beta(i, j);
        ++v;
      }
      c.coeffs[nv - 1] = beta(i, t);
      c.relation = lp::Relation::GreaterEqual;
      c.rhs = beta(i, t);
      prob.constraints.push_back(std::move(c));
    }
    lp::Constraint norm;
    norm.coeffs.assign(nv, 0.0);
    for (std::size_t v = 0; v < nk - 1; ++v) {
      norm.coeffs[v] = 1.0;
      norm.coeffs[nk - 1 + v] = -1.0;
    }
    norm.coeffs[nv - 1] = 1.0;
    norm.relation = lp::Relation::Equal;
    norm.rhs = 2.0;
    prob.constraints.push_back(std::move(norm));

    const lp::Solution sol = lp::minimize(prob);
    if (sol.status != lp::Status::Optimal) throw NumericError("irreducibility LP did not reach an optimum");
    if (sol.value - 1.0 < -tol) return false;
  }
  return true;
}

ConditionReport condition_report(const Eigen::MatrixXd& b, double support_tol) {
  ConditionReport r;
  r.gamma_s = simplicial_constant(b);
  r.gamma_a = b.rows() >= 2 ? affine_constant(b) : 0.0;
  if (b.rows() == b.cols()) {
    r.gamma_r = min_eigenvalue(b, &r.symmetrized);
    if (b.rows() >= 2) r.gamma_d = diag_dominance_constant(b);
  }
  SeparabilityResult sep = separability_check(b, support_tol);
  r.separable = sep.separable;
  r.novel_sets = std::move(sep.novel_sets);
  bool usable = (b.array() >= 0.0).all();
  for (Eigen::Index j = 0; usable && j < b.cols(); ++j) usable = b.col(j).sum() > 0.0;
  r.irreducible = usable && irreducibility_check(b);
  return r;
}

}  // namespace rptopic
