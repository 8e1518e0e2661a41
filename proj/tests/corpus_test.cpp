#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "rptopic/corpus.hpp"
#include "rptopic/error.hpp"
#include "test_support.hpp"

using namespace rptopic;

namespace {

std::vector<std::uint32_t> tokens_of(const CsrMatrix<std::uint32_t>& m, std::size_t row) {
  std::vector<std::uint32_t> out;
  for (std::size_t p = m.offsets[row]; p < m.offsets[row + 1]; ++p) {
    out.insert(out.end(), m.values[p], m.indices[p]);
  }
  return out;
}

}  // namespace

TEST(ParseUci, TranscribesTriples) {
  std::istringstream in("2\n2\n3\n1 1 2\n1 2 1\n2 1 3\n");
  const Corpus c = parse_uci(in);
  ASSERT_EQ(c.num_docs, 2u);
  ASSERT_EQ(c.num_words, 2u);
  EXPECT_EQ(c.count(0, 0), 2u);
  EXPECT_EQ(c.count(0, 1), 3u);
  EXPECT_EQ(c.count(1, 0), 1u);
  EXPECT_EQ(c.count(1, 1), 0u);
  EXPECT_EQ(c.doc_lengths, (std::vector<std::uint64_t>{3, 3}));
  EXPECT_EQ(c.vocab.size(), 2u);
}

TEST(ParseUci, EmptyBody) {
  std::istringstream in("1\n3\n0\n");
  const Corpus c = parse_uci(in);
  EXPECT_EQ(c.num_words, 3u);
  EXPECT_EQ(c.num_docs, 1u);
  EXPECT_EQ(c.counts.nnz(), 0u);
  EXPECT_EQ(c.doc_lengths, std::vector<std::uint64_t>{0});
}

TEST(ParseUci, DuplicateTriplesAreSummed) {
  std::istringstream in("1\n1\n2\n1 1 2\n1 1 5\n");
  EXPECT_EQ(parse_uci(in).count(0, 0), 7u);
}

TEST(ParseUci, MalformedLineReportsLineNumber) {
  std::istringstream in("1\n2\n2\n1 1 2\n1 x 5\n");
  try {
    parse_uci(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(ParseUci, OutOfRangeIds) {
  std::istringstream word("1\n2\n1\n1 3 1\n");
  EXPECT_THROW(parse_uci(word), BoundsError);
  std::istringstream doc("1\n2\n1\n2 1 1\n");
  EXPECT_THROW(parse_uci(doc), BoundsError);
}

TEST(ParseUci, VocabularyMustMatchW) {
  std::istringstream in("1\n2\n1\n1 1 1\n");
  std::istringstream vocab("apple\n");
  EXPECT_THROW(parse_uci(in, &vocab), ParseError);

  std::istringstream in2("1\n2\n1\n1 1 1\n");
  std::istringstream vocab2("apple\npear\n");
  EXPECT_EQ(parse_uci(in2, &vocab2).vocab[1], "pear");
}

TEST(ParseUci, RoundTripsTriples) {
  const Corpus c = fixtures::random_corpus(40, 25, 0, 30, 11);
  std::ostringstream out;
  write_uci(c, out);
  std::istringstream in(out.str());
  const Corpus back = parse_uci(in);
  ASSERT_EQ(back.num_docs, c.num_docs);
  ASSERT_EQ(back.num_words, c.num_words);
  EXPECT_EQ(back.counts.offsets, c.counts.offsets);
  EXPECT_EQ(back.counts.indices, c.counts.indices);
  EXPECT_EQ(back.counts.values, c.counts.values);
}

TEST(Corpus, InvariantsHold) {
  const Corpus c = fixtures::random_corpus(30, 50, 0, 20, 3);
  for (std::size_t m = 0; m < c.num_docs; ++m) {
    std::uint64_t total = 0;
    for (std::size_t p = c.counts.offsets[m]; p < c.counts.offsets[m + 1]; ++p) {
      EXPECT_GT(c.counts.values[p], 0u);
      total += c.counts.values[p];
    }
    EXPECT_EQ(total, c.doc_lengths[m]);
  }
  EXPECT_EQ(c.vocab.size(), c.num_words);
}

TEST(PruneVocab, IdentityWithoutCriteria) {
  const Corpus c = fixtures::random_corpus(20, 40, 5, 10, 4);
  const auto df = document_frequency(c);
  ASSERT_TRUE(std::all_of(df.begin(), df.end(), [](std::size_t d) { return d > 0; }));
  std::vector<std::size_t> kept;
  const Corpus p = prune_vocab(c, 0, {}, &kept);
  EXPECT_EQ(p.num_words, c.num_words);
  EXPECT_EQ(p.counts.values, c.counts.values);
  EXPECT_EQ(p.counts.indices, c.counts.indices);
  EXPECT_EQ(kept.size(), c.num_words);
}

TEST(PruneVocab, DropsRareWords) {
  // Word 2 occurs in one of three documents.
  const Corpus c = Corpus::from_documents(2, {{{0, 1}, {1, 2}}, {{0, 3}}, {{0, 1}}}, {"a", "b"});
  const Corpus p = prune_vocab(c, 1, {});
  EXPECT_EQ(p.num_words, 1u);
  EXPECT_EQ(p.vocab, std::vector<std::string>{"a"});
  EXPECT_EQ(p.doc_lengths, (std::vector<std::uint64_t>{1, 3, 1}));
}

TEST(PruneVocab, StopwordsAndEmptyResult) {
  const Corpus c = Corpus::from_documents(2, {{{0, 1}, {1, 2}}}, {"the", "cat"});
  const Corpus p = prune_vocab(c, 0, {"the"});
  EXPECT_EQ(p.vocab, std::vector<std::string>{"cat"});
  EXPECT_THROW(prune_vocab(c, 0, {"the", "cat"}), EmptyVocabularyError);
  EXPECT_THROW(prune_vocab(c, 5, {}), EmptyVocabularyError);
}

TEST(ReadWordSet, OneTokenPerLine) {
  std::istringstream in("the\nand\n\nof\n");
  const auto s = read_word_set(in);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_TRUE(s.count("and"));
}

TEST(SplitCorpus, EvenDocumentSplitsInHalf) {
  const Corpus c = Corpus::from_documents(2, {{{0, 2}, {1, 2}}});
  const SplitCorpus s = split_corpus(c, 1);
  auto h1 = tokens_of(s.half1, 0);
  auto h2 = tokens_of(s.half2, 0);
  EXPECT_EQ(h1.size(), 2u);
  EXPECT_EQ(h2.size(), 2u);
  h1.insert(h1.end(), h2.begin(), h2.end());
  std::sort(h1.begin(), h1.end());
  EXPECT_EQ(h1, (std::vector<std::uint32_t>{0, 0, 1, 1}));
}

TEST(SplitCorpus, OddLengthGivesFirstHalfTheExtraToken) {
  const Corpus c = Corpus::from_documents(3, {{{0, 2}, {1, 1}, {2, 2}}});
  const SplitCorpus s = split_corpus(c, 9);
  EXPECT_EQ(tokens_of(s.half1, 0).size(), 3u);
  EXPECT_EQ(tokens_of(s.half2, 0).size(), 2u);
}

TEST(SplitCorpus, PreservesTokenMultisets) {
  const Corpus c = fixtures::random_corpus(25, 60, 2, 40, 5);
  const SplitCorpus s = split_corpus(c, 77);
  ASSERT_EQ(s.num_docs, c.num_docs);
  for (std::size_t m = 0; m < s.num_docs; ++m) {
    auto a = tokens_of(s.half1, m);
    const auto b = tokens_of(s.half2, m);
    EXPECT_LE(a.size() - b.size(), 1u);
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    EXPECT_EQ(a, tokens_of(c.counts, m));
  }
}

TEST(SplitCorpus, DeterministicForSeed) {
  const Corpus c = fixtures::random_corpus(25, 60, 2, 40, 6);
  const SplitCorpus a = split_corpus(c, 123);
  const SplitCorpus b = split_corpus(c, 123);
  EXPECT_EQ(a.half1.indices, b.half1.indices);
  EXPECT_EQ(a.half1.values, b.half1.values);
  EXPECT_EQ(a.xbar.values, b.xbar.values);
  EXPECT_EQ(a.xbar_prime.values, b.xbar_prime.values);
  const SplitCorpus other = split_corpus(c, 124);
  EXPECT_NE(a.half1.values, other.half1.values);
}

TEST(SplitCorpus, RowsAreNormalized) {
  const Corpus c = fixtures::random_corpus(30, 80, 2, 15, 7);
  const SplitCorpus s = split_corpus(c, 8);
  std::vector<double> sum1(s.num_words, 0.0);
  for (std::size_t p = 0; p < s.xbar.values.size(); ++p) sum1[s.xbar.indices[p]] += s.xbar.values[p];
  for (std::size_t w = 0; w < s.num_words; ++w) {
    double sum2 = 0.0;
    for (std::size_t p = s.xbar_prime.offsets[w]; p < s.xbar_prime.offsets[w + 1]; ++p) {
      sum2 += s.xbar_prime.values[p];
    }
    if (s.silent[w]) continue;
    EXPECT_NEAR(sum1[w], 1.0, 1e-12);
    EXPECT_NEAR(sum2, 1.0, 1e-12);
  }
}

TEST(SplitCorpus, DropsShortDocumentsAndFlagsSilentWords) {
  // Word 2 appears only in a one-token document; word 1 appears once overall.
  const Corpus c = Corpus::from_documents(3, {{{0, 3}, {1, 1}}, {{2, 1}}, {{0, 2}}});
  const SplitCorpus s = split_corpus(c, 2);
  EXPECT_EQ(s.num_docs, 2u);
  EXPECT_EQ(s.dropped_docs, 1u);
  EXPECT_EQ(s.kept_docs, (std::vector<std::size_t>{0, 2}));
  EXPECT_TRUE(s.silent[1]);
  EXPECT_TRUE(s.silent[2]);
  EXPECT_FALSE(s.silent[0]);
  EXPECT_EQ(s.silent_words, (std::vector<std::size_t>{1, 2}));
}

TEST(SplitCorpus, AllDocumentsTooShort) {
  const Corpus c = Corpus::from_documents(2, {{{0, 1}}, {}});
  EXPECT_THROW(split_corpus(c, 1), EmptyCorpusError);
}

TEST(WordMass, AveragesCountsOverDocuments) {
  const Corpus c = Corpus::from_documents(2, {{{0, 3}, {1, 1}}, {{0, 2}}});
  EXPECT_EQ(word_mass(c), (std::vector<double>{2.5, 0.5}));
  const SplitCorpus s = split_corpus(c, 1);
  EXPECT_EQ(s.word_mass, (std::vector<double>{2.5, 0.5}));
}
