#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "rptopic/corpus.hpp"
#include "rptopic/error.hpp"

namespace rptopic {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Parses whitespace-separated unsigned integers; false on any stray text.
bool parse_fields(std::string_view s, std::uint64_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out[i]);
    if (ec != std::errc() || (ptr != s.data() + s.size() && *ptr != ' ' && *ptr != '\t')) {
      return false;
    }
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  }
  return trim(s).empty();
}

}  // namespace

Corpus parse_uci(std::istream& docword, std::istream* vocab) {
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t header[3];
  for (int h = 0; h < 3; ++h) {
    do {
      if (!std::getline(docword, line)) throw ParseError(line_no + 1, "truncated header");
      ++line_no;
    } while (trim(line).empty());
    if (!parse_fields(line, &header[h], 1)) throw ParseError(line_no, "malformed header value");
  }
  const std::uint64_t num_docs = header[0];
  const std::uint64_t num_words = header[1];

  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> docs(num_docs);
  while (std::getline(docword, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::uint64_t f[3];
    if (!parse_fields(line, f, 3)) throw ParseError(line_no, "expected 'docID wordID count'");
    if (f[0] == 0 || f[0] > num_docs) {
      throw BoundsError("line " + std::to_string(line_no) + ": docID " + std::to_string(f[0]) +
                        " outside [1, " + std::to_string(num_docs) + "]");
    }
    if (f[1] == 0 || f[1] > num_words) {
      throw BoundsError("line " + std::to_string(line_no) + ": wordID " + std::to_string(f[1]) +
                        " outside [1, " + std::to_string(num_words) + "]");
    }
    if (f[2] > 0xffffffffULL) throw ParseError(line_no, "count overflows 32 bits");
    docs[f[0] - 1].emplace_back(static_cast<std::uint32_t>(f[1] - 1),
                                static_cast<std::uint32_t>(f[2]));
  }

  std::vector<std::string> words;
  if (vocab) {
    std::size_t vocab_line = 0;
    while (std::getline(*vocab, line)) {
      ++vocab_line;
      std::string_view t = trim(line);
      if (t.empty() && vocab->peek() == std::char_traits<char>::eof()) break;
      words.emplace_back(t);
    }
    if (words.size() != num_words) {
      throw ParseError(vocab_line, "vocabulary has " + std::to_string(words.size()) +
                                       " entries, header says W=" + std::to_string(num_words));
    }
  }
  return Corpus::from_documents(num_words, docs, std::move(words));
}

void write_uci(const Corpus& corpus, std::ostream& out) {
  out << corpus.num_docs << '\n' << corpus.num_words << '\n' << corpus.counts.nnz() << '\n';
  for (std::size_t m = 0; m < corpus.num_docs; ++m) {
    auto ri = corpus.counts.row_indices(m);
    auto rv = corpus.counts.row_values(m);
    for (std::size_t j = 0; j < ri.size(); ++j) {
      out << (m + 1) << ' ' << (ri[j] + 1) << ' ' << rv[j] << '\n';
    }
  }
}

void write_vocab(const Corpus& corpus, std::ostream& out) {
  for (const auto& w : corpus.vocab) out << w << '\n';
}

}  // namespace rptopic
