#include "rptopic/regression.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "rptopic/error.hpp"
#include "rptopic/parallel.hpp"

namespace rptopic {

namespace {

// Weights below this are treated as zero on output.
constexpr double kClampTol = 1e-12;

}  // namespace

void project_to_simplex(std::span<double> x) {
  const std::size_t n = x.size();
  if (n == 0) return;
  std::vector<double> u(x.begin(), x.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  for (double& v : x) v = std::max(v - theta, 0.0);
}

SimplexLeastSquares::SimplexLeastSquares(Eigen::MatrixXd y, double eps,
                                         std::size_t max_iterations)
    : y_(std::move(y)), eps_(eps) {
  if (!(eps_ > 0.0)) throw Error("eps must be positive");
  if (y_.rows() == 0) throw DimensionError("simplex least squares needs at least one row");
  if (!y_.allFinite()) throw NumericError("non-finite entry in regression basis");
  gram_ = y_ * y_.transpose();
  const auto m = static_cast<std::size_t>(y_.rows());
  if (max_iterations == 0) {
    const double cap = std::ceil(10.0 * static_cast<double>(m) / eps_);
    max_iterations_ = static_cast<std::size_t>(std::min(cap, 1e6));
  } else {
    max_iterations_ = max_iterations;
  }
  initial_step_ = 1.0 / (2.0 * std::max(gram_.trace(), std::numeric_limits<double>::min()));

  degenerate_ = false;
  if (m >= 2) {
    Eigen::MatrixXd diffs = y_.bottomRows(y_.rows() - 1).rowwise() - y_.row(0);
    if (diffs.rows() > diffs.cols()) {
      degenerate_ = true;
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs);
      const double smallest = svd.singularValues().minCoeff();
      degenerate_ = smallest <= 1e-10 * std::max(1.0, y_.norm());
    }
  }
}

SimplexWeights SimplexLeastSquares::solve(std::span<const double> target) const {
  const auto m = static_cast<Eigen::Index>(y_.rows());
  if (target.size() != dim()) throw DimensionError("target length differs from basis dimension");
  Eigen::Map<const Eigen::VectorXd> t(target.data(), static_cast<Eigen::Index>(target.size()));
  if (!t.allFinite()) throw NumericError("non-finite entry in regression target");

  const Eigen::VectorXd h = y_ * t;
  Eigen::VectorXd b = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  Eigen::VectorXd g = 2.0 * (gram_ * b - h);
  Eigen::VectorXd z(m);
  double step = initial_step_;
  const double eps_sq = eps_ * eps_;

  std::size_t it = 0;
  for (;; ++it) {
    z = b - g;
    project_to_simplex({z.data(), static_cast<std::size_t>(m)});
    if ((z - b).norm() <= eps_) break;
    if (it >= max_iterations_) {
      throw ConvergenceError(std::vector<double>(b.data(), b.data() + m), it);
    }

    z = b - step * g;
    project_to_simplex({z.data(), static_cast<std::size_t>(m)});
    const Eigen::VectorXd d = z - b;
    const Eigen::VectorXd gd_vec = gram_ * d;
    const double slope = g.dot(d);
    const double curvature = d.dot(gd_vec);
    if (!(slope < 0.0)) break;  // no descent direction left at working precision

    // f(b + s d) - f(b) = s slope + s^2 curvature, exactly, for a quadratic.
    double s = 1.0;
    for (int halvings = 0; halvings < 60; ++halvings) {
      if (s * slope + s * s * curvature <= 1e-4 * s * slope) break;
      s *= 0.5;
    }
    const double decrease = -(s * slope + s * s * curvature);
    b += s * d;
    g += 2.0 * s * gd_vec;

    const double sy = 2.0 * s * s * curvature;
    const double ss = s * s * d.squaredNorm();
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : 1e12;
    if (decrease < eps_sq) {
      ++it;
      break;
    }
  }

  // Finish on the face the iterations reached: solve the equality-constrained
  // problem on the current support, dropping coordinates that go negative.
  // Kept only when feasible and no worse, so it never hurts the PG result.
  auto objective = [&](const Eigen::VectorXd& v) { return (t.transpose() - v.transpose() * y_).squaredNorm(); };
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (b(j) > 0.0) support.push_back(j);
  }
  while (!support.empty()) {
    const auto k = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs(k + 1);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) kkt(r, c) = 2.0 * gram_(support[r], support[c]);
      kkt(r, k) = kkt(k, r) = 1.0;
      rhs(r) = 2.0 * h(support[r]);
    }
    rhs(k) = 1.0;
    const Eigen::VectorXd x = kkt.completeOrthogonalDecomposition().solve(rhs);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index r = 0; r < k; ++r) {
      if (x(r) >= -kClampTol) kept.push_back(support[r]);
    }
    if (kept.size() == support.size()) {
      Eigen::VectorXd candidate = Eigen::VectorXd::Zero(m);
      for (Eigen::Index r = 0; r < k; ++r) candidate(support[r]) = std::max(x(r), 0.0);
      if (candidate.allFinite() && std::fabs(candidate.sum() - 1.0) <= 1e-9) {
        candidate /= candidate.sum();
        if (objective(candidate) <= objective(b)) b = candidate;
      }
      break;
    }
    support = std::move(kept);
  }

  SimplexWeights out;
  b = (b.array() < kClampTol).select(0.0, b);
  b /= b.sum();
  out.b.assign(b.data(), b.data() + m);
  out.residual = objective(b);
  out.iterations = it;
  out.degenerate = degenerate_;
  return out;
}

SimplexWeights simplex_lsq(std::span<const double> target, const Eigen::MatrixXd& y,
                           double eps) {
  return SimplexLeastSquares(y, eps).solve(target);
}

TopicEstimate estimate_topics(const NovelWordSet& novel, const CoocSource& source,
                              std::span<const double> word_mass,
                              const EstimateOptions& options) {
  const std::size_t w = source.num_words();
  const std::size_t k = novel.size();
  if (k == 0) throw Error("no novel words given");
  if (word_mass.size() != w) throw DimensionError("word mass length differs from W");

  // Columns of E^ at the novel words: E*_w = [E^_{w,i_1}, ..., E^_{w,i_K}].
  Eigen::MatrixXd restricted(w, k);
  std::vector<double> basis(w, 0.0);
  std::vector<double> col(w);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t i = novel.indices[t];
    if (i >= w) throw BoundsError("novel word index out of range");
    basis[i] = 1.0;
    source.project(basis, col);
    basis[i] = 0.0;
    for (std::size_t r = 0; r < w; ++r) {
      restricted(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = col[r];
    }
  }
  Eigen::MatrixXd y(k, k);
  for (std::size_t t = 0; t < k; ++t) {
    y.row(static_cast<Eigen::Index>(t)) =
        restricted.row(static_cast<Eigen::Index>(novel.indices[t]));
  }
  const SimplexLeastSquares solver(y, options.eps);

  // Row-major copy so each word's target is contiguous.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> targets = restricted;
  Eigen::MatrixXd unnormalized(w, k);
  std::vector<double> residual(w);
  parallel_for(w, resolve_threads(options.threads),
               [&](std::size_t begin, std::size_t end, std::size_t) {
                 for (std::size_t r = begin; r < end; ++r) {
                   const auto ri = static_cast<Eigen::Index>(r);
                   const SimplexWeights sol =
                       solver.solve({targets.row(ri).data(), k});
                   for (std::size_t t = 0; t < k; ++t) {
                     unnormalized(ri, static_cast<Eigen::Index>(t)) = word_mass[r] * sol.b[t];
                   }
                   residual[r] = sol.residual;
                 }
               });

  TopicEstimate out;
  out.topics = TopicMatrix::normalized(std::move(unnormalized));
  out.degenerate = solver.degenerate();
  out.residuals.min = *std::min_element(residual.begin(), residual.end());
  out.residuals.max = *std::max_element(residual.begin(), residual.end());
  out.residuals.mean =
      std::accumulate(residual.begin(), residual.end(), 0.0) / static_cast<double>(w);
  return out;
}

}  // namespace rptopic
