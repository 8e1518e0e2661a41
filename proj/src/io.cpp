#include "rptopic/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "rptopic/error.hpp"

namespace rptopic {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_matrix_tsv(std::ostream& out, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& labels, const std::string& column_prefix) {
  const bool labeled = !labels.empty();
  if (labeled && labels.size() != static_cast<std::size_t>(m.rows())) {
    throw DimensionError("label count differs from row count");
  }
  if (labeled) out << "word";
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (labeled || c > 0) out << '\t';
    out << column_prefix << (c + 1);
  }
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (labeled) out << labels[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (labeled || c > 0) out << '\t';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

LabeledMatrix read_matrix_tsv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header line");
  ++lineno;
  const std::vector<std::string> header = split_tabs(line);
  const bool labeled = !header.empty() && header.front() == "word";
  const std::size_t cols = header.size() - (labeled ? 1 : 0);

  LabeledMatrix out;
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != header.size()) throw ParseError(lineno, "expected " + std::to_string(header.size()) + " fields");
    std::size_t f = 0;
    if (labeled) out.labels.push_back(fields[f++]);
    for (; f < fields.size(); ++f) {
      const std::string& s = fields[f];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(lineno, "bad number '" + s + "'");
      values.push_back(v);
    }
    ++rows;
  }
  out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * cols + c];
    }
  }
  return out;
}

void write_solid_angles_tsv(std::ostream& out, const SolidAngleProfile& profile,
                            const NovelWordSet& novel, const std::vector<std::string>& vocab) {
  const std::size_t w = profile.qhat.size();
  if (vocab.size() != w) throw DimensionError("vocabulary size differs from profile");
  const std::vector<std::size_t> labels = cluster_labels(novel, w);
  out << "word\tqhat\tcluster_id\n";
  for (std::size_t i = 0; i < w; ++i) {
    out << vocab[i] << '\t' << format_double(profile.qhat[i]) << '\t' << labels[i] << '\n';
  }
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["gamma_s"] = finite_or_null(r.gamma_s);
  if (!std::isfinite(r.gamma_s)) j["gamma_s_note"] = "single row: taken as infinite";
  j["gamma_a"] = r.gamma_a;
  j["gamma_r"] = r.gamma_r ? Json(*r.gamma_r) : Json(nullptr);
  j["gamma_d"] = r.gamma_d ? Json(*r.gamma_d) : Json(nullptr);
  j["symmetrized"] = r.symmetrized;
  j["separable"] = r.separable;
  j["irreducible"] = r.irreducible;
  Json sets = Json::array();
  for (const auto& s : r.novel_sets) {
    Json one = Json::array();
    for (std::size_t w : s) one.push_back(w + 1);
    sets.push_back(one);
  }
  j["novel_sets"] = sets;
  return j;
}

Json to_json(const EvalResult& e) {
  Json j;
  j["l1_per_topic"] = e.l1_per_topic;
  Json matching = Json::array();
  for (std::size_t m : e.matching) matching.push_back(m + 1);
  j["matching"] = matching;
  j["per_topic"] = e.per_topic;
  if (e.cooc_dev) j["cooc_dev"] = *e.cooc_dev;
  if (e.novel_recall) j["novel_recall"] = *e.novel_recall;
  return j;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

}  // namespace rptopic
