#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rptopic/corpus.hpp"
#include "rptopic/rng.hpp"

namespace rptopic {

// Read-only access to a W x W word co-occurrence matrix, materialized or not.
class CoocSource {
 public:
  virtual ~CoocSource() = default;

  virtual std::size_t num_words() const = 0;

  // out = E d.
  virtual void project(std::span<const double> d, std::span<double> out) const = 0;

  // kernels::kBlock directions at once, word-major: d[w * kBlock + lane].
  virtual void project_block(std::span<const double> d, std::span<double> out) const;

  // out = row i of E.
  virtual void row(std::size_t i, std::span<double> out) const = 0;

  virtual std::span<const double> diag() const = 0;

  // Words whose rows carry no information; never candidates, never compared.
  virtual std::span<const std::uint8_t> silent() const = 0;

  std::vector<double> project(std::span<const double> d) const;
};

struct Direction {
  std::vector<double> values;
  std::size_t index = 0;
};

// Spherical Gaussian direction in R^W.
Direction sample_direction(std::size_t num_words, Rng& rng, std::size_t index = 0);

struct DocRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Empirical co-occurrence E^ = M X'bar Xbar^T over a range of documents of a
// split corpus, never materialized. M is always the full retained document
// count, so handles over a partition of the documents sum to the whole.
class CoocHandle final : public CoocSource {
 public:
  explicit CoocHandle(std::shared_ptr<const SplitCorpus> split);
  CoocHandle(std::shared_ptr<const SplitCorpus> split, DocRange docs);

  std::size_t num_words() const override { return num_words_; }
  using CoocSource::project;
  void project(std::span<const double> d, std::span<double> out) const override;
  void project_block(std::span<const double> d, std::span<double> out) const override;
  void row(std::size_t i, std::span<double> out) const override;
  std::span<const double> diag() const override { return diag_; }
  std::span<const std::uint8_t> silent() const override { return split_->silent; }

  double scale() const { return scale_; }
  DocRange docs() const { return docs_; }
  const SplitCorpus& split() const { return *split_; }

 private:
  std::shared_ptr<const SplitCorpus> split_;
  DocRange docs_;
  std::size_t num_words_;
  double scale_;
  CsrMatrix<double> xbar_docs_;    // local docs x W
  CsrMatrix<double> xprime_words_; // W x local docs
  CsrMatrix<double> xprime_docs_;  // local docs x W
  std::vector<double> diag_;
};

// A fully materialized matrix, e.g. the ideal co-occurrence of a known model.
class DenseCooc final : public CoocSource {
 public:
  explicit DenseCooc(Eigen::MatrixXd e);

  std::size_t num_words() const override { return static_cast<std::size_t>(e_.rows()); }
  using CoocSource::project;
  void project(std::span<const double> d, std::span<double> out) const override;
  void row(std::size_t i, std::span<double> out) const override;
  std::span<const double> diag() const override { return diag_; }
  std::span<const std::uint8_t> silent() const override { return silent_; }

  const Eigen::MatrixXd& matrix() const { return e_; }

 private:
  Eigen::MatrixXd e_;
  std::vector<double> diag_;
  std::vector<std::uint8_t> silent_;
};

// Handles over disjoint document ranges of one split corpus; projections,
// rows and diagonals are sums of the per-shard values.
class ShardedCooc final : public CoocSource {
 public:
  explicit ShardedCooc(std::vector<std::shared_ptr<const CoocHandle>> shards);

  std::size_t num_words() const override { return shards_.front()->num_words(); }
  using CoocSource::project;
  void project(std::span<const double> d, std::span<double> out) const override;
  void project_block(std::span<const double> d, std::span<double> out) const override;
  void row(std::size_t i, std::span<double> out) const override;
  std::span<const double> diag() const override { return diag_; }
  std::span<const std::uint8_t> silent() const override { return shards_.front()->silent(); }

  std::size_t num_shards() const { return shards_.size(); }

 private:
  std::vector<std::shared_ptr<const CoocHandle>> shards_;
  std::vector<double> diag_;
};

// Row i of E^ (entries E^_{i,j} for all j).
std::vector<double> cooc_entries(const CoocSource& source, std::size_t i);

// Throws PartitionError unless the shards tile the documents of one corpus.
void validate_partition(std::span<const CoocHandle* const> shards);

// Sum of per-shard projections, in the order given.
std::vector<double> shard_project(std::span<const CoocHandle* const> shards,
                                  std::span<const double> d);

// Contiguous, near-equal document ranges.
std::vector<DocRange> even_shards(std::size_t num_docs, std::size_t count);

std::vector<std::shared_ptr<const CoocHandle>> make_shards(
    const std::shared_ptr<const SplitCorpus>& split, std::size_t count);

// Dense E^ (W x W); for tests and diagnostics on small vocabularies.
Eigen::MatrixXd materialize(const CoocSource& source);

}  // namespace rptopic
