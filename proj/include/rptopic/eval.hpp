#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rptopic/novel_detect.hpp"
#include "rptopic/projector.hpp"

namespace rptopic {

// Minimum-cost perfect matching on a square cost matrix. Returns assignment
// with assignment[row] = column.
std::vector<std::size_t> hungarian(const Eigen::MatrixXd& cost);

struct EvalResult {
  double l1_per_topic = 0.0;
  // matching[k]: column of the estimate paired with true topic k.
  std::vector<std::size_t> matching;
  std::vector<double> per_topic;  // matched l1 distance for each true topic
  std::optional<double> cooc_dev;
  std::optional<double> novel_recall;
};

// Column l1 distances under the optimal one-to-one matching, divided by K.
EvalResult l1_matched_error(const Eigen::MatrixXd& beta_hat, const Eigen::MatrixXd& beta);

// Fraction of topics whose true novel set contains a selected word. A topic
// picked twice is counted once, so the duplicate costs another topic its slot.
double novel_recovery(const std::vector<std::size_t>& selected,
                      const std::vector<std::vector<std::size_t>>& truth_sets);

// max_ij |E^_ij - E_ij|, built one column at a time.
double cooc_deviation(const CoocSource& source, const Eigen::MatrixXd& ideal);

}  // namespace rptopic
