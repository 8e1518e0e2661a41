#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rptopic/novel_detect.hpp"
#include "rptopic/projector.hpp"
#include "rptopic/topic_matrix.hpp"

namespace rptopic {

inline constexpr double kDefaultEps = 1e-4;

// Euclidean projection onto the probability simplex (sort based).
void project_to_simplex(std::span<double> x);

struct SimplexWeights {
  std::vector<double> b;
  double residual = 0.0;  // ||target - b Y||^2
  std::size_t iterations = 0;
  bool degenerate = false;  // rows of Y affinely dependent; minimizer may not be unique
};

// min ||t - b Y||^2 over the probability simplex, for a fixed Y (m x D).
// Projected gradient with Barzilai-Borwein steps and Armijo backtracking,
// started at the barycenter. Converged when the projected-gradient norm is
// at most eps or one step decreases the objective by less than eps^2.
class SimplexLeastSquares {
 public:
  SimplexLeastSquares(Eigen::MatrixXd y, double eps, std::size_t max_iterations = 0);

  SimplexWeights solve(std::span<const double> target) const;

  std::size_t num_weights() const { return static_cast<std::size_t>(y_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(y_.cols()); }
  bool degenerate() const { return degenerate_; }
  std::size_t max_iterations() const { return max_iterations_; }

 private:
  Eigen::MatrixXd y_;
  Eigen::MatrixXd gram_;  // Y Y^T
  double eps_;
  std::size_t max_iterations_;
  double initial_step_;
  bool degenerate_;
};

SimplexWeights simplex_lsq(std::span<const double> target, const Eigen::MatrixXd& y,
                           double eps = kDefaultEps);

struct EstimateOptions {
  double eps = kDefaultEps;
  std::size_t threads = 0;
};

struct ResidualStats {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct TopicEstimate {
  TopicMatrix topics;
  ResidualStats residuals;
  bool degenerate = false;
};

// Regresses each word's co-occurrence with the novel words onto the novel
// words' own rows, rescales row w by word_mass[w], then normalizes columns.
TopicEstimate estimate_topics(const NovelWordSet& novel, const CoocSource& source,
                              std::span<const double> word_mass,
                              const EstimateOptions& options = {});

}  // namespace rptopic
