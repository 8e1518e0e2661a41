// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Tolerances are fixed here, not taken from flags.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rptopic/conditions.hpp"
#include "rptopic/eval.hpp"
#include "rptopic/novel_detect.hpp"
#include "rptopic/pipeline.hpp"
#include "rptopic/projector.hpp"
#include "rptopic/regression.hpp"
#include "rptopic/synthgen.hpp"
#include "test_support.hpp"

using namespace rptopic;

namespace {

// Desk-scale semi-synthetic fixture.
constexpr std::size_t kBaseWords = 500;
constexpr std::size_t kTopics = 5;
constexpr std::size_t kDocLength = 100;
constexpr double kAlpha = 0.03;
constexpr double kConcentration = 1.0;

constexpr double kMaxL1At50k = 0.05;
constexpr int kAllowedInversions = 1;
constexpr int kRecoverySeeds = 20;
constexpr int kRecoveryRequired = 18;
constexpr double kIdealTol = 1e-6;
constexpr double kIdealMinGammaA = 0.05;
constexpr int kCoocTrials = 100;
constexpr int kCoocRequired = 95;
constexpr double kSolidAngleTol = 0.03;
constexpr double kLatticeTol = 1e-9;
constexpr double kFixtureTol = 1e-10;
constexpr double kOracleTol = 1e-8;
constexpr double kShardTol = 1e-8;
constexpr double kScaleTol = 0.30;
constexpr double kEstimateTol = 0.15;

struct Outcome {
  bool pass = false;
  std::string detail;
};

GroundTruth desk_model(std::uint64_t seed) {
  return fixtures::semi_synthetic(kBaseWords, kTopics, kAlpha, kConcentration, seed);
}

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct DeskRun {
  double l1 = 0.0;
  double recall = 0.0;
};

DeskRun desk_run(std::uint64_t seed, std::size_t docs) {
  const GroundTruth gt = desk_model(seed);
  const Corpus c = sample_corpus(gt, docs, kDocLength, seed);
  PipelineConfig cfg;
  cfg.K = kTopics;
  cfg.seed = seed;
  const RunResult run = run_on_corpus(c, cfg);
  DeskRun out;
  out.l1 = l1_matched_error(run.estimate->topics.beta, gt.beta.beta).l1_per_topic;
  out.recall = novel_recovery(run.novel.indices, separability_check(gt.beta.beta).novel_sets);
  return out;
}

// Criteria 1 and 2 share the M = 50k runs.
std::vector<DeskRun> runs_50k;

Outcome end_to_end_recovery() {
  const std::vector<std::size_t> sizes{1000, 5000, 20000, 50000};
  int inversions = 0;
  double worst = 0.0;
  std::ostringstream rows;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<double> err;
    for (std::size_t m : sizes) err.push_back(m == 50000 ? runs_50k[seed].l1 : desk_run(seed, m).l1);
    for (std::size_t i = 1; i < err.size(); ++i) inversions += err[i] >= err[i - 1];
    worst = std::max(worst, err.back());
    rows << " seed" << seed << "=[";
    for (std::size_t i = 0; i < err.size(); ++i) rows << (i ? "," : "") << fmt(err[i]);
    rows << "]";
  }
  return {inversions <= kAllowedInversions && worst <= kMaxL1At50k,
          "inversions=" + std::to_string(inversions) + " worst_l1@50k=" + fmt(worst) + rows.str()};
}

Outcome novel_word_recovery() {
  int perfect = 0;
  for (const DeskRun& r : runs_50k) perfect += r.recall == 1.0;
  return {perfect >= kRecoveryRequired,
          std::to_string(perfect) + "/" + std::to_string(kRecoverySeeds) + " seeds with recall 1"};
}

Outcome ideal_geometry() {
  int models = 0, exact = 0, skipped = 0;
  double worst = 0.0;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> topics(2, 6), words(10, 60);
  std::uniform_real_distribution<double> alpha(0.05, 1.0);
  for (std::uint64_t seed = 0; models < 50; ++seed) {
    const std::size_t k = topics(rng), w = words(rng);
    const double a = alpha(rng);
    const GroundTruth gt = fixtures::semi_synthetic(w, k, a, 1.0, 1000 + seed);
    if (affine_constant(gt.mixing.Rbar) < kIdealMinGammaA) {
      ++skipped;
      continue;
    }
    ++models;
    const DenseCooc e(ideal_cooc(gt));
    DetectOptions d;
    d.projections = 150 * k;
    d.zeta = 1e-9;
    d.seed = seed;
    const EstimateOptions est;
    try {
      const NovelWordSet novel = select_novel_words(estimate_solid_angles(e, d), e, k);
      const Eigen::VectorXd mass = gt.beta.beta * gt.mixing.a;
      const std::vector<double> m(mass.data(), mass.data() + mass.size());
      const TopicEstimate t = estimate_topics(novel, e, m, est);
      const EvalResult r = l1_matched_error(t.topics.beta, gt.beta.beta);
      double dev = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        const auto hat = static_cast<Eigen::Index>(r.matching[c]);
        dev = std::max(dev, (t.topics.beta.col(hat) - gt.beta.beta.col(col)).cwiseAbs().maxCoeff());
      }
      worst = std::max(worst, dev);
      exact += dev <= kIdealTol;
    } catch (const std::exception&) {
      worst = std::max(worst, 1.0);
    }
  }
  return {exact == models, std::to_string(exact) + "/" + std::to_string(models) +
                               " models within tolerance, max_dev=" + fmt(worst) +
                               " (rejected " + std::to_string(skipped) + " with small gamma_a)"};
}

Outcome cooc_convergence() {
  int better = 0;
  for (int t = 0; t < kCoocTrials; ++t) {
    const GroundTruth gt = fixtures::semi_synthetic(95, kTopics, kAlpha, kConcentration, 5000 + t);
    const Eigen::MatrixXd e = ideal_cooc(gt);
    auto dev = [&](std::size_t m, std::uint64_t s) {
      const CoocHandle h(std::make_shared<const SplitCorpus>(split_corpus(sample_corpus(gt, m, 50, s), s)));
      return cooc_deviation(h, e);
    };
    better += dev(20000, 2 * t + 1) < dev(1000, 2 * t);
  }
  return {better >= kCoocRequired, std::to_string(better) + "/" + std::to_string(kCoocTrials) +
                                       " trials smaller at M=20k"};
}

Outcome solid_angles() {
  // Three novel words and four interior mixtures.
  Eigen::MatrixXd b(7, 3);
  b << 1, 0, 0,
       0, 1, 0,
       0, 0, 1,
       1, 1, 1,
       2, 1, 1,
       1, 2, 1,
       1, 1, 2;
  const GroundTruth gt = make_ground_truth(TopicMatrix::normalized(b), MixingModel::symmetric(3, 0.5));
  const DenseCooc e(ideal_cooc(gt));
  DetectOptions d;
  d.projections = 10000;
  d.zeta = 1e-6;
  d.seed = 11;
  const SolidAngleProfile p = estimate_solid_angles(e, d);
  double dev = 0.0;
  for (std::size_t i = 0; i < 3; ++i) dev = std::max(dev, std::fabs(p.qhat[i] - 1.0 / 3.0));
  bool interior_zero = true;
  for (std::size_t i = 3; i < 7; ++i) interior_zero = interior_zero && p.qhat[i] == 0.0;
  return {dev <= kSolidAngleTol && interior_zero,
          "max|qhat-1/3|=" + fmt(dev) + (interior_zero ? " interior all zero" : " interior nonzero")};
}

Outcome condition_lattice() {
  int violations = 0;
  std::mt19937_64 rng(606);
  for (int t = 0; t < 500; ++t) {
    const Eigen::MatrixXd b = fixtures::random_row_stochastic(2 + t % 7, rng);
    violations += affine_constant(b) > simplicial_constant(b) + kLatticeTol;
  }
  for (int t = 0; t < 500; ++t) {
    const Eigen::MatrixXd b = fixtures::random_psd(2 + t % 7, rng);
    const double gr = min_eigenvalue(b), ga = affine_constant(b), gs = simplicial_constant(b);
    violations += gr > 0 && ga < gr - kLatticeTol;
    violations += ga > 0 && gs < ga - kLatticeTol;
    const double gd = diag_dominance_constant(b);
    violations += gd > 0 && gs < gd - kLatticeTol;
  }
  Eigen::MatrixXd f4(4, 4);
  f4 << 1, 0, .5, .5, 0, 1, .5, .5, .5, .5, 1, 0, .5, .5, 0, 1;
  Eigen::MatrixXd f3(3, 3);
  f3 << 1, 0, 1, 0, 1, 1, 1, 1, 2;
  const bool f4_ok = affine_constant(f4) <= kFixtureTol && simplicial_constant(f4) > 0.0 &&
                     diag_dominance_constant(f4) > 0.0;
  const bool f3_ok = affine_constant(f3) > 0.0 && std::fabs(min_eigenvalue(f3)) <= kFixtureTol &&
                     diag_dominance_constant(f3) <= 0.0;
  return {violations == 0 && f4_ok && f3_ok,
          "violations=" + std::to_string(violations) + " fixture4x4=" + (f4_ok ? "ok" : "bad") +
              " fixture3x3=" + (f3_ok ? "ok" : "bad")};
}

Outcome separability_irreducibility() {
  std::mt19937_64 rng(707);
  int disagree = 0, separable = 0;
  for (int t = 0; t < 500; ++t) {
    const Eigen::Index k = 2 + t % 6;
    const Eigen::MatrixXd b = fixtures::random_nonnegative(k + 2 + t % 9, k, t % 2 ? 0.9 : 0.5, rng);
    const bool s = separability_check(b).separable;
    separable += s;
    disagree += s != irreducibility_check(b);
  }
  return {disagree == 0, "disagreements=" + std::to_string(disagree) + " (" + std::to_string(separable) +
                             "/500 separable)"};
}

Outcome regression_oracle() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index k = 2 + t % 4, dim = k + t % 3;
    Eigen::MatrixXd y(k, dim);
    Eigen::VectorXd target(dim);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) y(i, j) = u(rng);
    }
    for (Eigen::Index j = 0; j < dim; ++j) target(j) = 1.5 * u(rng);
    const double oracle = fixtures::simplex_lsq_oracle(target, y);
    const SimplexWeights w = simplex_lsq({target.data(), static_cast<std::size_t>(dim)}, y);
    worst = std::max(worst, std::fabs(w.residual - oracle));
  }
  return {worst <= kOracleTol, "max objective gap=" + fmt(worst) + " at default eps"};
}

Outcome distributed_equivalence() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Corpus c = fixtures::random_corpus(50 + 10 * seed, 300 + 40 * seed, 3, 40, seed);
    const auto split = std::make_shared<const SplitCorpus>(split_corpus(c, seed));
    const CoocHandle whole(split);
    Rng rng(seed);
    const auto d = sample_direction(split->num_words, rng).values;
    const auto ref = whole.project(d);
    double scale = 0.0;
    for (double v : ref) scale = std::max(scale, std::fabs(v));
    for (std::size_t n : {1u, 2u, 4u, 8u}) {
      const auto shards = make_shards(split, n);
      std::vector<const CoocHandle*> ptrs;
      for (const auto& s : shards) ptrs.push_back(s.get());
      const auto v = shard_project(ptrs, d);
      for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::fabs(v[i] - ref[i]) / scale);
    }
  }
  return {worst <= kShardTol, "max relative deviation=" + fmt(worst)};
}

Outcome model_selection() {
  const std::vector<double> band{0.1, 0.2, 0.5, 1.0};
  const double wide = 20.0;
  bool ok = true;
  std::ostringstream rows;
  for (std::uint64_t seed : {3u, 4u}) {
    const GroundTruth gt = desk_model(seed);
    const Corpus c = sample_corpus(gt, 50000, kDocLength, seed);
    const CoocHandle h(std::make_shared<const SplitCorpus>(split_corpus(c, seed)));
    rows << " seed" << seed << ":";
    for (double zeta : band) {
      DetectOptions d;
      d.projections = 150 * 10;
      d.zeta = zeta;
      d.seed = seed;
      const std::size_t k = estimate_K(estimate_solid_angles(h, d), h, 0.05, 10);
      ok = ok && k == kTopics;
      rows << " zeta=" << zeta << "->" << k;
    }
    DetectOptions d;
    d.projections = 150 * 10;
    d.zeta = wide;
    d.seed = seed;
    const std::size_t k = estimate_K(estimate_solid_angles(h, d), h, 0.05, 10);
    ok = ok && k < kTopics;
    rows << " zeta=" << wide << "->" << k;
  }
  return {ok, "tau=0.05 k_max=10" + rows.str()};
}

Outcome runtime_scaling() {
  const GroundTruth gt = desk_model(1);
  auto make_run = [&](std::size_t docs) {
    RunResult run;
    PipelineConfig cfg;
    cfg.K = kTopics;
    cfg.seed = 1;
    cfg.threads = 1;
    run_split(sample_corpus(gt, docs, kDocLength, 1), cfg, run);
    return run;
  };
  // Timings are minima over interleaved repeats: the work is deterministic and
  // interference on a shared host only ever adds time.
  constexpr int kRepeats = 7;
  auto config = [](std::size_t p) {
    PipelineConfig cfg;
    cfg.K = kTopics;
    cfg.P = p;
    cfg.seed = 1;
    cfg.threads = 1;
    return cfg;
  };
  auto min_times = [&](const std::vector<std::function<void()>>& jobs) {
    std::vector<double> best(jobs.size(), std::numeric_limits<double>::infinity());
    for (int r = 0; r < kRepeats; ++r) {
      for (std::size_t j = 0; j < jobs.size(); ++j) best[j] = std::min(best[j], seconds(jobs[j]));
    }
    return best;
  };

  RunResult base = make_run(20000);
  RunResult big = make_run(40000);
  RunResult huge = make_run(80000);
  const auto detect = min_times({[&] { run_detect(config(500), base); },
                                 [&] { run_detect(config(1000), base); },
                                 [&] { run_detect(config(2000), base); },
                                 [&] { run_detect(config(1000), big); },
                                 [&] { run_detect(config(1000), huge); }});
  const double p1 = detect[0], p2 = detect[1], p4 = detect[2], m2 = detect[3], m4 = detect[4];
  auto linear = [](double a, double b) { return std::fabs(b / a / 2.0 - 1.0) <= kScaleTol; };
  const bool p_ok = linear(p1, p2) && linear(p2, p4);
  const bool m_ok = linear(p2, m2) && linear(m2, m4);

  // The estimate stage consumes only the novel words, so its cost must not
  // follow P. Both sizes recover the same anchors here; at P = K detection
  // often returns other words, whose regressions cost more for reasons
  // unrelated to P.
  RunResult at10 = base;
  RunResult at100 = base;
  run_detect(config(10 * kTopics), at10);
  run_detect(config(100 * kTopics), at100);
  auto sorted = [](std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const bool same_anchors = sorted(at10.novel.indices) == sorted(at100.novel.indices);
  const auto estimate = min_times({[&] {
                                     for (int i = 0; i < 10; ++i) run_estimate(config(10 * kTopics), at10);
                                   },
                                   [&] {
                                     for (int i = 0; i < 10; ++i) run_estimate(config(100 * kTopics), at100);
                                   }});
  const double e10 = estimate[0], e100 = estimate[1];
  const bool e_ok = std::fabs(e100 / e10 - 1.0) <= kEstimateTol;

  return {p_ok && m_ok && e_ok,
          "detect P 500/1000/2000: " + fmt(p1) + "/" + fmt(p2) + "/" + fmt(p4) + "s; M 20k/40k/80k: " + fmt(p2) +
              "/" + fmt(m2) + "/" + fmt(m4) + "s; estimate P=10K vs 100K: " + fmt(e10) + "/" + fmt(e100) + "s" +
              (same_anchors ? " (same anchors)" : " (different anchors)")};
}

}  // namespace

// Criterion numbers on the command line restrict the run to those criteria.
int main(int argc, char** argv) {
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(static_cast<std::size_t>(std::atoi(argv[i])));
  auto wanted = [&](std::size_t n) { return only.empty() || only.count(n) > 0; };
  if (wanted(1) || wanted(2)) {
    for (int seed = 0; seed < kRecoverySeeds; ++seed) {
      runs_50k.push_back(desk_run(static_cast<std::uint64_t>(seed), 50000));
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"end-to-end recovery", end_to_end_recovery},
      {"novel-word recovery", novel_word_recovery},
      {"ideal-geometry exactness", ideal_geometry},
      {"co-occurrence convergence", cooc_convergence},
      {"solid-angle correctness", solid_angles},
      {"condition lattice", condition_lattice},
      {"separability equals irreducibility", separability_irreducibility},
      {"regression oracle", regression_oracle},
      {"distributed equivalence", distributed_equivalence},
      {"model selection", model_selection},
      {"runtime scaling", runtime_scaling},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!wanted(i + 1)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
