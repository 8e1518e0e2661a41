#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

#include "rptopic/sparse.hpp"

namespace rptopic {

// Bag-of-words observation: W words by M documents of integer counts.
// Counts are stored document-major; every stored entry is positive.
struct Corpus {
  std::size_t num_words = 0;
  std::size_t num_docs = 0;
  CsrMatrix<std::uint32_t> counts;  // num_docs x num_words
  std::vector<std::string> vocab;
  std::vector<std::uint64_t> doc_lengths;

  std::uint32_t count(std::size_t word, std::size_t doc) const;

  // Builds a corpus from per-document (word, count) lists; duplicates are
  // summed and zero counts dropped. Words are 0-based.
  static Corpus from_documents(
      std::size_t num_words,
      const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& docs,
      std::vector<std::string> vocab = {});
};

std::vector<std::string> default_vocab(std::size_t num_words);

// Number of documents in which each word occurs.
std::vector<std::size_t> document_frequency(const Corpus& corpus);

// (1/M) * total count of each word.
std::vector<double> word_mass(const Corpus& corpus);

// UCI bag-of-words: three header lines (M, W, NNZ) then "docID wordID count"
// with 1-based ids. The vocabulary stream holds one token per line; when
// absent, tokens are synthesized.
Corpus parse_uci(std::istream& docword, std::istream* vocab = nullptr);
void write_uci(const Corpus& corpus, std::ostream& docword);
void write_vocab(const Corpus& corpus, std::ostream& out);
std::unordered_set<std::string> read_word_set(std::istream& in);

// Keeps words with document frequency > min_df that are not stopwords.
// kept_words, if given, receives the retained original word indices.
Corpus prune_vocab(const Corpus& corpus, std::size_t min_df,
                   const std::unordered_set<std::string>& stopwords,
                   std::vector<std::size_t>* kept_words = nullptr);

// Two token halves of every retained document, each row-normalized.
struct SplitCorpus {
  std::size_t num_words = 0;
  std::size_t num_docs = 0;  // retained documents
  std::uint64_t seed = 0;

  CsrMatrix<std::uint32_t> half1;  // num_docs x num_words
  CsrMatrix<std::uint32_t> half2;
  CsrMatrix<double> xbar;          // half1, rows normalized; document-major
  CsrMatrix<double> xbar_prime;    // half2, rows normalized; word-major
  std::vector<double> row_totals1;
  std::vector<double> row_totals2;

  // Words absent from either half; their co-occurrence rows are unusable.
  std::vector<std::uint8_t> silent;
  std::vector<std::size_t> silent_words;

  std::vector<std::size_t> kept_docs;  // original document index per row
  std::size_t dropped_docs = 0;        // documents with fewer than 2 tokens
  std::vector<double> word_mass;       // (1/M) X_w 1 over retained documents
};

SplitCorpus split_corpus(const Corpus& corpus, std::uint64_t seed);

}  // namespace rptopic
