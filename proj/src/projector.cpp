#include "rptopic/projector.hpp"

#include <algorithm>
#include <string>

#include "rptopic/error.hpp"
#include "rptopic/kernels.hpp"

namespace rptopic {

using kernels::kBlock;

void CoocSource::project_block(std::span<const double> d, std::span<double> out) const {
  const std::size_t w = num_words();
  std::vector<double> single(w);
  std::vector<double> result(w);
  for (std::size_t lane = 0; lane < kBlock; ++lane) {
    for (std::size_t i = 0; i < w; ++i) single[i] = d[i * kBlock + lane];
    project(single, result);
    for (std::size_t i = 0; i < w; ++i) out[i * kBlock + lane] = result[i];
  }
}

std::vector<double> CoocSource::project(std::span<const double> d) const {
  if (d.size() != num_words()) {
    throw DimensionError("direction has length " + std::to_string(d.size()) + ", expected " +
                         std::to_string(num_words()));
  }
  std::vector<double> out(num_words());
  project(d, out);
  return out;
}

Direction sample_direction(std::size_t num_words, Rng& rng, std::size_t index) {
  Direction dir;
  dir.index = index;
  dir.values.resize(num_words);
  // A zero draw has probability zero; redraw rather than return it.
  do {
    fill_standard_normal(dir.values, rng);
  } while (std::all_of(dir.values.begin(), dir.values.end(), [](double x) { return x == 0.0; }));
  return dir;
}

CoocHandle::CoocHandle(std::shared_ptr<const SplitCorpus> split)
    : CoocHandle(split, DocRange{0, split->num_docs}) {}

CoocHandle::CoocHandle(std::shared_ptr<const SplitCorpus> split, DocRange docs)
    : split_(std::move(split)), docs_(docs) {
  const SplitCorpus& s = *split_;
  if (docs.begin > docs.end || docs.end > s.num_docs) {
    throw BoundsError("document range [" + std::to_string(docs.begin) + ", " +
                      std::to_string(docs.end) + ") outside corpus of " +
                      std::to_string(s.num_docs) + " documents");
  }
  num_words_ = s.num_words;
  scale_ = static_cast<double>(s.num_docs);
  const std::size_t local = docs.end - docs.begin;

  xbar_docs_.rows = local;
  xbar_docs_.cols = num_words_;
  const std::size_t first = s.xbar.offsets[docs.begin];
  const std::size_t last = s.xbar.offsets[docs.end];
  xbar_docs_.offsets.resize(local + 1);
  for (std::size_t m = 0; m <= local; ++m) {
    xbar_docs_.offsets[m] = s.xbar.offsets[docs.begin + m] - first;
  }
  xbar_docs_.indices.assign(s.xbar.indices.begin() + static_cast<std::ptrdiff_t>(first),
                            s.xbar.indices.begin() + static_cast<std::ptrdiff_t>(last));
  xbar_docs_.values.assign(s.xbar.values.begin() + static_cast<std::ptrdiff_t>(first),
                           s.xbar.values.begin() + static_cast<std::ptrdiff_t>(last));

  xprime_words_.cols = local;
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t w = 0; w < num_words_; ++w) {
    auto ri = s.xbar_prime.row_indices(w);
    auto rv = s.xbar_prime.row_values(w);
    auto lo = std::lower_bound(ri.begin(), ri.end(), static_cast<std::uint32_t>(docs.begin));
    auto hi = std::lower_bound(lo, ri.end(), static_cast<std::uint32_t>(docs.end));
    idx.clear();
    val.clear();
    for (auto it = lo; it != hi; ++it) {
      idx.push_back(*it - static_cast<std::uint32_t>(docs.begin));
      val.push_back(rv[static_cast<std::size_t>(it - ri.begin())]);
    }
    xprime_words_.push_row(idx, val);
  }

  // diag[w] = M sum_m X'[w,m] X[w,m], accumulated in document order so that
  // it agrees exactly with row(w)[w].
  diag_.assign(num_words_, 0.0);
  xprime_docs_ = transpose(xprime_words_);
  for (std::size_t m = 0; m < local; ++m) {
    auto ai = xbar_docs_.row_indices(m);
    auto av = xbar_docs_.row_values(m);
    auto bi = xprime_docs_.row_indices(m);
    auto bv = xprime_docs_.row_values(m);
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < ai.size() && q < bi.size()) {
      if (ai[p] < bi[q]) {
        ++p;
      } else if (bi[q] < ai[p]) {
        ++q;
      } else {
        diag_[ai[p]] += bv[q] * av[p];
        ++p;
        ++q;
      }
    }
  }
  for (double& x : diag_) x *= scale_;
}

void CoocHandle::project(std::span<const double> d, std::span<double> out) const {
  if (d.size() != num_words_ || out.size() != num_words_) {
    throw DimensionError("projection dimension mismatch");
  }
  thread_local std::vector<double> u;
  u.resize(xbar_docs_.rows);
  const auto& k = kernels::active();
  k.csr_matvec(kernels::CsrView::of(xbar_docs_), 1.0, d.data(), u.data());
  k.csr_matvec(kernels::CsrView::of(xprime_words_), scale_, u.data(), out.data());
}

void CoocHandle::project_block(std::span<const double> d, std::span<double> out) const {
  if (d.size() != num_words_ * kBlock || out.size() != num_words_ * kBlock) {
    throw DimensionError("block projection dimension mismatch");
  }
  kernels::active().cooc_block(kernels::CsrView::of(xbar_docs_), kernels::CsrView::of(xprime_docs_), scale_,
                               d.data(), out.data(), num_words_);
}

void CoocHandle::row(std::size_t i, std::span<double> out) const {
  if (i >= num_words_) throw BoundsError("word index " + std::to_string(i) + " out of range");
  if (out.size() != num_words_) throw DimensionError("row buffer has wrong length");
  std::fill(out.begin(), out.end(), 0.0);
  auto pi = xprime_words_.row_indices(i);
  auto pv = xprime_words_.row_values(i);
  for (std::size_t j = 0; j < pi.size(); ++j) {
    auto ai = xbar_docs_.row_indices(pi[j]);
    auto av = xbar_docs_.row_values(pi[j]);
    for (std::size_t t = 0; t < ai.size(); ++t) out[ai[t]] += pv[j] * av[t];
  }
  for (double& x : out) x *= scale_;
}

DenseCooc::DenseCooc(Eigen::MatrixXd e) : e_(std::move(e)) {
  if (e_.rows() != e_.cols()) throw DimensionError("co-occurrence matrix must be square");
  const auto w = static_cast<std::size_t>(e_.rows());
  diag_.resize(w);
  silent_.assign(w, 0);
  for (std::size_t i = 0; i < w; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    diag_[i] = e_(ii, ii);
    silent_[i] = static_cast<std::uint8_t>(e_.row(ii).isZero(0.0));
  }
}

void DenseCooc::project(std::span<const double> d, std::span<double> out) const {
  if (d.size() != num_words() || out.size() != num_words()) {
    throw DimensionError("projection dimension mismatch");
  }
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::Map<const Eigen::VectorXd> dv(d.data(), n);
  Eigen::Map<Eigen::VectorXd> ov(out.data(), n);
  ov.noalias() = e_ * dv;
}

void DenseCooc::row(std::size_t i, std::span<double> out) const {
  if (i >= num_words()) throw BoundsError("word index " + std::to_string(i) + " out of range");
  const auto ii = static_cast<Eigen::Index>(i);
  for (Eigen::Index j = 0; j < e_.cols(); ++j) out[static_cast<std::size_t>(j)] = e_(ii, j);
}

ShardedCooc::ShardedCooc(std::vector<std::shared_ptr<const CoocHandle>> shards)
    : shards_(std::move(shards)) {
  if (shards_.empty()) throw PartitionError("no shards given");
  std::vector<const CoocHandle*> raw;
  for (const auto& s : shards_) raw.push_back(s.get());
  validate_partition(raw);
  diag_.assign(num_words(), 0.0);
  for (const auto& s : shards_) {
    auto d = s->diag();
    for (std::size_t w = 0; w < diag_.size(); ++w) diag_[w] += d[w];
  }
}

void ShardedCooc::project(std::span<const double> d, std::span<double> out) const {
  thread_local std::vector<double> part;
  part.resize(out.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& s : shards_) {
    s->project(d, part);
    for (std::size_t w = 0; w < out.size(); ++w) out[w] += part[w];
  }
}

void ShardedCooc::project_block(std::span<const double> d, std::span<double> out) const {
  thread_local std::vector<double> part;
  part.resize(out.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& s : shards_) {
    s->project_block(d, part);
    for (std::size_t w = 0; w < out.size(); ++w) out[w] += part[w];
  }
}

void ShardedCooc::row(std::size_t i, std::span<double> out) const {
  std::vector<double> part(out.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& s : shards_) {
    s->row(i, part);
    for (std::size_t w = 0; w < out.size(); ++w) out[w] += part[w];
  }
}

std::vector<double> cooc_entries(const CoocSource& source, std::size_t i) {
  if (i >= source.num_words()) {
    throw BoundsError("word index " + std::to_string(i) + " out of range");
  }
  std::vector<double> out(source.num_words());
  source.row(i, out);
  return out;
}

void validate_partition(std::span<const CoocHandle* const> shards) {
  if (shards.empty()) throw PartitionError("no shards given");
  const SplitCorpus* corpus = &shards.front()->split();
  std::vector<DocRange> ranges;
  std::size_t covered = 0;
  for (const CoocHandle* s : shards) {
    if (&s->split() != corpus || s->num_words() != shards.front()->num_words() ||
        s->scale() != shards.front()->scale()) {
      throw PartitionError("shards do not come from the same corpus");
    }
    ranges.push_back(s->docs());
    covered += s->docs().end - s->docs().begin;
  }
  if (covered != corpus->num_docs) {
    throw PartitionError("shards cover " + std::to_string(covered) + " documents, corpus has " +
                         std::to_string(corpus->num_docs));
  }
  std::sort(ranges.begin(), ranges.end(),
            [](const DocRange& a, const DocRange& b) { return a.begin < b.begin; });
  std::size_t expect = 0;
  for (const DocRange& r : ranges) {
    if (r.begin != expect) throw PartitionError("shard document ranges overlap or leave gaps");
    expect = r.end;
  }
}

std::vector<double> shard_project(std::span<const CoocHandle* const> shards,
                                  std::span<const double> d) {
  validate_partition(shards);
  const std::size_t w = shards.front()->num_words();
  if (d.size() != w) throw DimensionError("direction length differs from W");
  std::vector<double> out(w, 0.0);
  std::vector<double> part(w);
  for (const CoocHandle* s : shards) {
    s->project(d, part);
    for (std::size_t i = 0; i < w; ++i) out[i] += part[i];
  }
  return out;
}

std::vector<DocRange> even_shards(std::size_t num_docs, std::size_t count) {
  count = std::max<std::size_t>(count, 1);
  std::vector<DocRange> out;
  for (std::size_t s = 0; s < count; ++s) {
    out.push_back({num_docs * s / count, num_docs * (s + 1) / count});
  }
  return out;
}

std::vector<std::shared_ptr<const CoocHandle>> make_shards(
    const std::shared_ptr<const SplitCorpus>& split, std::size_t count) {
  std::vector<std::shared_ptr<const CoocHandle>> out;
  for (const DocRange& r : even_shards(split->num_docs, count)) {
    out.push_back(std::make_shared<const CoocHandle>(split, r));
  }
  return out;
}

Eigen::MatrixXd materialize(const CoocSource& source) {
  const std::size_t w = source.num_words();
  Eigen::MatrixXd e(w, w);
  std::vector<double> basis(w, 0.0);
  std::vector<double> col(w);
  for (std::size_t j = 0; j < w; ++j) {
    basis[j] = 1.0;
    source.project(basis, col);
    basis[j] = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }
  }
  return e;
}

}  // namespace rptopic
