#include "rptopic/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rptopic/error.hpp"
#include "rptopic/parallel.hpp"

namespace rptopic {

MixingModel MixingModel::dirichlet(Eigen::VectorXd alpha) {
  if (alpha.size() == 0) throw DimensionError("empty Dirichlet parameter");
  if (!(alpha.array() > 0.0).all()) throw Error("Dirichlet parameters must be positive");
  MixingModel m;
  const double s = alpha.sum();
  m.a = alpha / s;
  Eigen::MatrixXd moment = alpha * alpha.transpose();
  moment.diagonal() += alpha;
  m.second_moment = moment / (s * (s + 1.0));
  const Eigen::VectorXd inv_a = m.a.cwiseInverse();
  m.Rbar = inv_a.asDiagonal() * m.second_moment * inv_a.asDiagonal();
  m.alpha = std::move(alpha);
  return m;
}

MixingModel MixingModel::symmetric(std::size_t num_topics, double alpha) {
  return dirichlet(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(num_topics), alpha));
}

GroundTruth make_ground_truth(TopicMatrix beta, MixingModel mixing) {
  if (beta.beta.cols() != mixing.a.size()) throw DimensionError("topic count differs from mixing model");
  GroundTruth gt;
  gt.eta = (beta.beta * mixing.a).minCoeff();
  gt.beta = std::move(beta);
  gt.mixing = std::move(mixing);
  return gt;
}

Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& alpha, Rng& rng) {
  const Eigen::Index k = alpha.size();
  Eigen::VectorXd logs(k);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Eigen::Index i = 0; i < k; ++i) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a).
    std::gamma_distribution<double> gamma(alpha(i) + 1.0, 1.0);
    const double g = gamma(rng);
    const double u = 1.0 - unif(rng);  // (0, 1]
    logs(i) = std::log(g) + std::log(u) / alpha(i);
  }
  const double top = logs.maxCoeff();
  Eigen::VectorXd theta = (logs.array() - top).exp();
  theta /= theta.sum();
  return theta;
}

TopicMatrix dirichlet_topics(std::size_t num_words, std::size_t num_topics,
                             double concentration, std::uint64_t seed) {
  if (num_words == 0 || num_topics == 0) throw DimensionError("empty topic matrix requested");
  const auto w = static_cast<Eigen::Index>(num_words);
  const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(w, concentration);
  Eigen::MatrixXd beta(w, static_cast<Eigen::Index>(num_topics));
  for (std::size_t k = 0; k < num_topics; ++k) {
    Rng rng = make_rng(seed, "topic", k);
    beta.col(static_cast<Eigen::Index>(k)) = sample_dirichlet(alpha, rng);
  }
  return TopicMatrix::normalized(std::move(beta));
}

TopicMatrix make_separable(const TopicMatrix& beta0) {
  const Eigen::Index w = beta0.beta.rows();
  const Eigen::Index k = beta0.beta.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(w + k, k);
  out.topRows(w) = beta0.beta;
  for (Eigen::Index t = 0; t < k; ++t) {
    const double top = beta0.beta.col(t).maxCoeff();
    if (!(top > 0.0)) throw DegenerateTopicError(static_cast<std::size_t>(t));
    out(w + t, t) = top;
  }
  return TopicMatrix::normalized(std::move(out));
}

Corpus sample_corpus(const GroundTruth& gt, std::size_t num_docs, std::size_t doc_length,
                     std::uint64_t seed, std::size_t threads) {
  if (num_docs == 0) throw Error("need at least one document");
  if (doc_length < 2) throw Error("documents need at least two tokens");
  if (!(gt.eta > 0.0)) throw DegenerateModelError("some word has zero expected frequency");
  const Eigen::MatrixXd& beta = gt.beta.beta;
  const auto w = static_cast<std::size_t>(beta.rows());
  const auto k = static_cast<std::size_t>(beta.cols());

  // Per-topic cumulative distributions. Drawing a topic from theta and then a
  // word from that topic is the same as drawing a word from beta theta.
  std::vector<std::vector<double>> cdf(k, std::vector<double>(w));
  for (std::size_t t = 0; t < k; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
      acc += beta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
      cdf[t][i] = acc;
    }
  }

  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> docs(num_docs);
  parallel_for(num_docs, resolve_threads(threads), [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<std::uint32_t> tokens(doc_length);
    std::vector<double> topic_cdf(k);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t m = begin; m < end; ++m) {
      Rng rng = make_rng(seed, "doc", m);
      const Eigen::VectorXd theta = sample_dirichlet(gt.mixing.alpha, rng);
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) topic_cdf[t] = acc += theta(static_cast<Eigen::Index>(t));
      for (auto& token : tokens) {
        const double u = unif(rng) * acc;
        const std::size_t t = std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(topic_cdf.begin(), topic_cdf.end(), u) - topic_cdf.begin()),
            k - 1);
        const double v = unif(rng) * cdf[t].back();
        token = static_cast<std::uint32_t>(std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(cdf[t].begin(), cdf[t].end(), v) - cdf[t].begin()),
            w - 1));
      }
      std::sort(tokens.begin(), tokens.end());
      auto& doc = docs[m];
      for (std::size_t i = 0; i < tokens.size();) {
        std::size_t j = i;
        while (j < tokens.size() && tokens[j] == tokens[i]) ++j;
        doc.emplace_back(tokens[i], static_cast<std::uint32_t>(j - i));
        i = j;
      }
    }
  });
  return Corpus::from_documents(w, docs);
}

Eigen::MatrixXd ideal_cooc(const GroundTruth& gt) {
  const Eigen::MatrixXd& beta = gt.beta.beta;
  if (beta.rows() > static_cast<Eigen::Index>(kMaxIdealWords)) {
    throw Error("vocabulary too large to materialize the ideal co-occurrence matrix");
  }
  const Eigen::VectorXd& a = gt.mixing.a;
  const Eigen::VectorXd mass = beta * a;
  if (!(mass.minCoeff() > 0.0)) throw DegenerateModelError("some word has zero expected frequency");
  const Eigen::MatrixXd bbar = mass.cwiseInverse().asDiagonal() * beta * a.asDiagonal();
  Eigen::MatrixXd e = bbar * gt.mixing.Rbar * bbar.transpose();
  return 0.5 * (e + e.transpose());
}

}  // namespace rptopic
