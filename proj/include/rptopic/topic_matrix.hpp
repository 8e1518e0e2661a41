#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace rptopic {

// W x K nonnegative matrix whose columns are distributions over words.
struct TopicMatrix {
  Eigen::MatrixXd beta;
  std::vector<double> column_sums_pre_norm;

  std::size_t num_words() const { return static_cast<std::size_t>(beta.rows()); }
  std::size_t num_topics() const { return static_cast<std::size_t>(beta.cols()); }

  // Divides each column by its sum; throws DegenerateTopicError on a zero column.
  static TopicMatrix normalized(Eigen::MatrixXd unnormalized);
};

bool is_column_stochastic(const Eigen::MatrixXd& beta, double tol = 1e-9);

}  // namespace rptopic
