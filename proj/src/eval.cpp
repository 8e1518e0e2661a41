#include "rptopic/eval.hpp"

#include <algorithm>
#include <cmath>

#include "rptopic/error.hpp"
#include "rptopic/kernels.hpp"

namespace rptopic {

EvalResult l1_matched_error(const Eigen::MatrixXd& beta_hat, const Eigen::MatrixXd& beta) {
  if (beta_hat.rows() != beta.rows() || beta_hat.cols() != beta.cols()) {
    throw DimensionError("estimate and truth differ in shape");
  }
  const Eigen::Index k = beta.cols();
  const auto n = static_cast<std::size_t>(beta.rows());
  const auto& kern = kernels::active();
  Eigen::MatrixXd cost(k, k);
  for (Eigen::Index t = 0; t < k; ++t) {
    for (Eigen::Index h = 0; h < k; ++h) {
      cost(t, h) = kern.l1_distance(beta.col(t).data(), beta_hat.col(h).data(), n);
    }
  }
  EvalResult out;
  out.matching = hungarian(cost);
  double total = 0.0;
  for (Eigen::Index t = 0; t < k; ++t) {
    const double c = cost(t, static_cast<Eigen::Index>(out.matching[static_cast<std::size_t>(t)]));
    out.per_topic.push_back(c);
    total += c;
  }
  out.l1_per_topic = k > 0 ? total / static_cast<double>(k) : 0.0;
  return out;
}

double novel_recovery(const std::vector<std::size_t>& selected,
                      const std::vector<std::vector<std::size_t>>& truth_sets) {
  if (truth_sets.empty()) return 0.0;
  std::vector<std::size_t> hits(truth_sets.size(), 0);
  for (std::size_t w : selected) {
    for (std::size_t k = 0; k < truth_sets.size(); ++k) {
      if (std::find(truth_sets[k].begin(), truth_sets[k].end(), w) != truth_sets[k].end()) {
        ++hits[k];
        break;
      }
    }
  }
  // A double-covered topic still counts once; the second pick is wasted.
  const auto covered = std::count_if(hits.begin(), hits.end(), [](std::size_t h) { return h >= 1; });
  return static_cast<double>(covered) / static_cast<double>(truth_sets.size());
}

double cooc_deviation(const CoocSource& source, const Eigen::MatrixXd& ideal) {
  const std::size_t w = source.num_words();
  if (static_cast<std::size_t>(ideal.rows()) != w || static_cast<std::size_t>(ideal.cols()) != w) {
    throw DimensionError("ideal matrix shape differs from vocabulary size");
  }
  std::vector<double> basis(w, 0.0);
  std::vector<double> col(w);
  double dev = 0.0;
  for (std::size_t j = 0; j < w; ++j) {
    basis[j] = 1.0;
    source.project(basis, col);
    basis[j] = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
      dev = std::max(dev, std::fabs(col[i] - ideal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    }
  }
  return dev;
}

}  // namespace rptopic
