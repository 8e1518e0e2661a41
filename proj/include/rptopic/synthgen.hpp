#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "rptopic/corpus.hpp"
#include "rptopic/rng.hpp"
#include "rptopic/topic_matrix.hpp"

namespace rptopic {

// Dirichlet prior on per-document topic weights, with its first two moments.
struct MixingModel {
  Eigen::VectorXd alpha;
  Eigen::VectorXd a;              // E[theta]
  Eigen::MatrixXd second_moment;  // E[theta theta^T]
  Eigen::MatrixXd Rbar;           // diag(a)^-1 E[theta theta^T] diag(a)^-1

  static MixingModel dirichlet(Eigen::VectorXd alpha);
  static MixingModel symmetric(std::size_t num_topics, double alpha);
};

struct GroundTruth {
  TopicMatrix beta;
  MixingModel mixing;
  double eta = 0.0;  // min_i (beta a)_i
  std::optional<Eigen::MatrixXd> E_ideal;
};

GroundTruth make_ground_truth(TopicMatrix beta, MixingModel mixing);

// Draw from Dirichlet(alpha). Works in log space so tiny shape parameters do
// not underflow to an all-zero vector.
Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& alpha, Rng& rng);

// W x K matrix with independent Dirichlet(concentration) columns.
TopicMatrix dirichlet_topics(std::size_t num_words, std::size_t num_topics,
                             double concentration, std::uint64_t seed);

// Appends one novel row per topic whose sole entry equals that column's
// largest entry, then renormalizes columns. Output is (W+K) x K.
TopicMatrix make_separable(const TopicMatrix& beta0);

// M documents of N tokens each. Document m uses its own seed substream, so
// the result does not depend on the thread count.
Corpus sample_corpus(const GroundTruth& gt, std::size_t num_docs, std::size_t doc_length,
                     std::uint64_t seed, std::size_t threads = 0);

inline constexpr std::size_t kMaxIdealWords = 5000;

// E = beta_bar Rbar beta_bar^T with beta_bar = diag(beta a)^-1 beta diag(a).
Eigen::MatrixXd ideal_cooc(const GroundTruth& gt);

}  // namespace rptopic
