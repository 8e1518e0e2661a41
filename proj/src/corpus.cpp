#include "rptopic/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>

#include "rptopic/error.hpp"
#include "rptopic/rng.hpp"

namespace rptopic {

std::uint32_t Corpus::count(std::size_t word, std::size_t doc) const {
  auto idx = counts.row_indices(doc);
  auto it = std::lower_bound(idx.begin(), idx.end(), static_cast<std::uint32_t>(word));
  if (it == idx.end() || *it != word) return 0;
  return counts.row_values(doc)[static_cast<std::size_t>(it - idx.begin())];
}

Corpus Corpus::from_documents(
    std::size_t num_words,
    const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& docs,
    std::vector<std::string> vocab) {
  Corpus c;
  c.num_words = num_words;
  c.num_docs = docs.size();
  c.counts.cols = num_words;
  c.vocab = vocab.empty() ? default_vocab(num_words) : std::move(vocab);
  if (c.vocab.size() != num_words) throw DimensionError("vocabulary size differs from W");
  std::vector<std::uint32_t> idx;
  std::vector<std::uint32_t> val;
  for (const auto& doc : docs) {
    std::map<std::uint32_t, std::uint64_t> merged;
    for (auto [w, n] : doc) {
      if (w >= num_words) throw BoundsError("word index " + std::to_string(w) + " >= W");
      merged[w] += n;
    }
    idx.clear();
    val.clear();
    std::uint64_t total = 0;
    for (auto [w, n] : merged) {
      if (n == 0) continue;
      idx.push_back(w);
      val.push_back(static_cast<std::uint32_t>(n));
      total += n;
    }
    c.counts.push_row(idx, val);
    c.doc_lengths.push_back(total);
  }
  return c;
}

std::vector<std::string> default_vocab(std::size_t num_words) {
  std::vector<std::string> v;
  v.reserve(num_words);
  for (std::size_t w = 0; w < num_words; ++w) v.push_back("word" + std::to_string(w + 1));
  return v;
}

std::vector<std::size_t> document_frequency(const Corpus& corpus) {
  std::vector<std::size_t> df(corpus.num_words, 0);
  for (std::uint32_t w : corpus.counts.indices) ++df[w];
  return df;
}

std::vector<double> word_mass(const Corpus& corpus) {
  std::vector<double> mass(corpus.num_words, 0.0);
  for (std::size_t j = 0; j < corpus.counts.nnz(); ++j) {
    mass[corpus.counts.indices[j]] += corpus.counts.values[j];
  }
  if (corpus.num_docs > 0) {
    for (double& m : mass) m /= static_cast<double>(corpus.num_docs);
  }
  return mass;
}

std::unordered_set<std::string> read_word_set(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    if (!line.empty()) words.insert(line);
  }
  return words;
}

Corpus prune_vocab(const Corpus& corpus, std::size_t min_df,
                   const std::unordered_set<std::string>& stopwords,
                   std::vector<std::size_t>* kept_words) {
  const auto df = document_frequency(corpus);
  std::vector<std::int64_t> remap(corpus.num_words, -1);
  std::vector<std::size_t> kept;
  for (std::size_t w = 0; w < corpus.num_words; ++w) {
    if (df[w] <= min_df) continue;
    if (stopwords.contains(corpus.vocab[w])) continue;
    remap[w] = static_cast<std::int64_t>(kept.size());
    kept.push_back(w);
  }
  if (kept.empty()) throw EmptyVocabularyError("vocabulary pruning removed every word");

  Corpus out;
  out.num_words = kept.size();
  out.num_docs = corpus.num_docs;
  out.counts.cols = kept.size();
  for (std::size_t w : kept) out.vocab.push_back(corpus.vocab[w]);
  std::vector<std::uint32_t> idx;
  std::vector<std::uint32_t> val;
  for (std::size_t m = 0; m < corpus.num_docs; ++m) {
    idx.clear();
    val.clear();
    std::uint64_t total = 0;
    auto ri = corpus.counts.row_indices(m);
    auto rv = corpus.counts.row_values(m);
    for (std::size_t j = 0; j < ri.size(); ++j) {
      std::int64_t nw = remap[ri[j]];
      if (nw < 0) continue;
      idx.push_back(static_cast<std::uint32_t>(nw));
      val.push_back(rv[j]);
      total += rv[j];
    }
    out.counts.push_row(idx, val);
    out.doc_lengths.push_back(total);
  }
  if (kept_words) *kept_words = std::move(kept);
  return out;
}

namespace {

void append_counts(CsrMatrix<std::uint32_t>& half, std::vector<std::uint32_t>& tokens) {
  std::sort(tokens.begin(), tokens.end());
  std::vector<std::uint32_t> idx;
  std::vector<std::uint32_t> val;
  for (std::size_t t = 0; t < tokens.size();) {
    std::size_t u = t;
    while (u < tokens.size() && tokens[u] == tokens[t]) ++u;
    idx.push_back(tokens[t]);
    val.push_back(static_cast<std::uint32_t>(u - t));
    t = u;
  }
  half.push_row(idx, val);
}

std::vector<double> row_totals(const CsrMatrix<std::uint32_t>& half, std::size_t num_words) {
  std::vector<double> totals(num_words, 0.0);
  for (std::size_t j = 0; j < half.nnz(); ++j) totals[half.indices[j]] += half.values[j];
  return totals;
}

}  // namespace

SplitCorpus split_corpus(const Corpus& corpus, std::uint64_t seed) {
  SplitCorpus s;
  s.num_words = corpus.num_words;
  s.seed = seed;
  s.half1.cols = corpus.num_words;
  s.half2.cols = corpus.num_words;

  std::vector<std::uint32_t> tokens;
  std::vector<std::uint32_t> first;
  std::vector<std::uint32_t> second;
  for (std::size_t m = 0; m < corpus.num_docs; ++m) {
    if (corpus.doc_lengths[m] < 2) {
      ++s.dropped_docs;
      continue;
    }
    tokens.clear();
    auto ri = corpus.counts.row_indices(m);
    auto rv = corpus.counts.row_values(m);
    for (std::size_t j = 0; j < ri.size(); ++j) tokens.insert(tokens.end(), rv[j], ri[j]);
    Rng rng = make_rng(seed, "split", m);
    std::shuffle(tokens.begin(), tokens.end(), rng);
    const std::size_t cut = (tokens.size() + 1) / 2;
    first.assign(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(cut));
    second.assign(tokens.begin() + static_cast<std::ptrdiff_t>(cut), tokens.end());
    append_counts(s.half1, first);
    append_counts(s.half2, second);
    s.kept_docs.push_back(m);
  }
  s.num_docs = s.kept_docs.size();
  if (s.num_docs == 0) throw EmptyCorpusError("no document has at least 2 tokens");

  s.row_totals1 = row_totals(s.half1, s.num_words);
  s.row_totals2 = row_totals(s.half2, s.num_words);

  s.xbar.rows = s.half1.rows;
  s.xbar.cols = s.half1.cols;
  s.xbar.offsets = s.half1.offsets;
  s.xbar.indices = s.half1.indices;
  s.xbar.values.resize(s.half1.nnz());
  for (std::size_t j = 0; j < s.half1.nnz(); ++j) {
    s.xbar.values[j] = s.half1.values[j] / s.row_totals1[s.half1.indices[j]];
  }

  CsrMatrix<double> second_half;
  second_half.rows = s.half2.rows;
  second_half.cols = s.half2.cols;
  second_half.offsets = s.half2.offsets;
  second_half.indices = s.half2.indices;
  second_half.values.assign(s.half2.values.begin(), s.half2.values.end());
  s.xbar_prime = transpose(second_half);
  for (std::size_t w = 0; w < s.num_words; ++w) {
    for (std::size_t j = s.xbar_prime.offsets[w]; j < s.xbar_prime.offsets[w + 1]; ++j) {
      s.xbar_prime.values[j] /= s.row_totals2[w];
    }
  }

  s.silent.assign(s.num_words, 0);
  for (std::size_t w = 0; w < s.num_words; ++w) {
    if (s.row_totals1[w] == 0.0 || s.row_totals2[w] == 0.0) {
      s.silent[w] = 1;
      s.silent_words.push_back(w);
    }
  }

  s.word_mass.assign(s.num_words, 0.0);
  for (std::size_t w = 0; w < s.num_words; ++w) {
    s.word_mass[w] = (s.row_totals1[w] + s.row_totals2[w]) / static_cast<double>(s.num_docs);
  }
  return s;
}

}  // namespace rptopic
