#include "rptopic/topic_matrix.hpp"

#include <cmath>

#include "rptopic/error.hpp"

namespace rptopic {

TopicMatrix TopicMatrix::normalized(Eigen::MatrixXd unnormalized) {
  TopicMatrix out;
  out.column_sums_pre_norm.resize(static_cast<std::size_t>(unnormalized.cols()));
  for (Eigen::Index k = 0; k < unnormalized.cols(); ++k) {
    const double sum = unnormalized.col(k).sum();
    out.column_sums_pre_norm[static_cast<std::size_t>(k)] = sum;
    if (!(sum > 0.0)) throw DegenerateTopicError(static_cast<std::size_t>(k));
    unnormalized.col(k) /= sum;
  }
  out.beta = std::move(unnormalized);
  return out;
}

bool is_column_stochastic(const Eigen::MatrixXd& beta, double tol) {
  if ((beta.array() < 0.0).any()) return false;
  for (Eigen::Index k = 0; k < beta.cols(); ++k) {
    if (std::fabs(beta.col(k).sum() - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace rptopic
