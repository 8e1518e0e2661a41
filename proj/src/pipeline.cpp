#include "rptopic/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "rptopic/conditions.hpp"
#include "rptopic/eval.hpp"
#include "rptopic/kernels.hpp"
#include "rptopic/parallel.hpp"

namespace rptopic {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void log(const PipelineConfig& config, const std::string& msg) {
  if (config.verbose) std::clog << "[rptopic] " << msg << '\n';
}

// Runs f, rethrowing any library error tagged with the stage.
template <class F>
auto staged(Stage stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

int exit_code(Stage stage) {
  switch (stage) {
    case Stage::Usage: return 2;
    case Stage::Input: return 3;
    case Stage::Split: return 4;
    case Stage::Detect: return 5;
    case Stage::Estimate: return 6;
    case Stage::Evaluate: return 7;
    case Stage::Conditions: return 8;
    case Stage::Generate: return 9;
  }
  return 1;
}

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::Usage: return "usage";
    case Stage::Input: return "input";
    case Stage::Split: return "split";
    case Stage::Detect: return "detect";
    case Stage::Estimate: return "estimate";
    case Stage::Evaluate: return "evaluate";
    case Stage::Conditions: return "conditions";
    case Stage::Generate: return "generate";
  }
  return "unknown";
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& m) { throw StageError(Stage::Usage, m); };
  if (K && *K == 0) fail("K must be positive");
  if (!K && k_max == 0) fail("k-max must be positive");
  if (!(zeta > 0.0)) fail("zeta must be positive");
  if (!(eps > 0.0)) fail("eps must be positive");
  if (!(tau >= 0.0)) fail("tau must be nonnegative");
  if (shards == 0) fail("shards must be positive");
}

std::size_t PipelineConfig::projections() const {
  if (P > 0) return P;
  return kProjectionsPerTopic * (K ? *K : k_max);
}

Json to_json(const PipelineConfig& c) {
  Json j;
  j["K"] = c.K ? Json(*c.K) : Json("auto");
  j["k_max"] = c.k_max;
  j["P"] = c.projections();
  j["zeta"] = c.zeta;
  j["eps"] = c.eps;
  j["tau"] = c.tau;
  j["seed"] = c.seed;
  j["shards"] = c.shards;
  j["min_df"] = c.min_df;
  j["threads"] = resolve_threads(c.threads);
  j["docword"] = c.docword;
  j["vocab"] = c.vocab;
  j["stopwords"] = c.stopwords;
  j["truth"] = c.truth;
  j["out_dir"] = c.out_dir;
  return j;
}

void merge_config(PipelineConfig& c, const Json& j) {
  if (j.contains("K")) {
    if (j["K"].is_number_unsigned()) {
      c.K = j["K"].get<std::size_t>();
    } else {
      c.K.reset();
    }
  }
  if (j.contains("k_max")) c.k_max = j["k_max"].get<std::size_t>();
  if (j.contains("P")) c.P = j["P"].get<std::size_t>();
  if (j.contains("zeta")) c.zeta = j["zeta"].get<double>();
  if (j.contains("eps")) c.eps = j["eps"].get<double>();
  if (j.contains("tau")) c.tau = j["tau"].get<double>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("shards")) c.shards = j["shards"].get<std::size_t>();
  if (j.contains("min_df")) c.min_df = j["min_df"].get<std::size_t>();
  if (j.contains("stopwords")) c.stopwords = j["stopwords"].get<std::string>();
}

LoadedCorpus load_corpus(const PipelineConfig& config) {
  return staged(Stage::Input, [&] {
    std::ifstream docword = open_input(config.docword);
    std::ifstream vocab;
    if (!config.vocab.empty()) vocab = open_input(config.vocab);
    LoadedCorpus out;
    Corpus raw = parse_uci(docword, config.vocab.empty() ? nullptr : &vocab);
    out.original_words = raw.num_words;
    std::unordered_set<std::string> stop;
    if (!config.stopwords.empty()) {
      std::ifstream in = open_input(config.stopwords);
      stop = read_word_set(in);
    }
    // With nothing to prune, keep every row so estimates align with the input vocabulary.
    if (config.min_df == 0 && stop.empty()) {
      out.kept_words.resize(raw.num_words);
      for (std::size_t i = 0; i < raw.num_words; ++i) out.kept_words[i] = i;
      out.corpus = std::move(raw);
    } else {
      out.corpus = prune_vocab(raw, config.min_df, stop, &out.kept_words);
    }
    log(config, "loaded " + std::to_string(out.corpus.num_docs) + " documents, " +
                    std::to_string(out.corpus.num_words) + " words");
    return out;
  });
}

void run_split(const Corpus& corpus, const PipelineConfig& config, RunResult& run) {
  const auto start = Clock::now();
  staged(Stage::Split, [&] {
    auto split = std::make_shared<const SplitCorpus>(split_corpus(corpus, config.seed));
    if (config.shards > 1) {
      run.source = std::make_shared<const ShardedCooc>(make_shards(split, config.shards));
    } else {
      run.source = std::make_shared<const CoocHandle>(split);
    }
    run.split = std::move(split);
  });
  run.timings.emplace_back("split", seconds_since(start));
  log(config, "split: " + std::to_string(run.split->num_docs) + " documents retained, " +
                  std::to_string(run.split->dropped_docs) + " dropped, " +
                  std::to_string(run.split->silent_words.size()) + " silent words");
}

void run_detect(const PipelineConfig& config, RunResult& run) {
  const auto start = Clock::now();
  staged(Stage::Detect, [&] {
    DetectOptions opts;
    opts.projections = config.projections();
    opts.zeta = config.zeta;
    opts.seed = config.seed;
    opts.threads = config.threads;
    run.profile = estimate_solid_angles(*run.source, opts);
    if (config.K) {
      run.K = *config.K;
      run.K_estimated = false;
      run.novel = select_novel_words(run.profile, *run.source, run.K);
    } else {
      run.novel = walk_extremes(run.profile, *run.source, config.tau, config.k_max);
      run.K = run.novel.size();
      run.K_estimated = true;
      if (run.K == 0) throw InsufficientExtremesError(0, 1);
    }
  });
  run.timings.emplace_back("detect", seconds_since(start));
  log(config, "detect: K = " + std::to_string(run.K) + " with " + kernels::active().name + " kernels");
}

void run_estimate(const PipelineConfig& config, RunResult& run) {
  const auto start = Clock::now();
  staged(Stage::Estimate, [&] {
    EstimateOptions opts;
    opts.eps = config.eps;
    opts.threads = config.threads;
    run.estimate = estimate_topics(run.novel, *run.source, run.split->word_mass, opts);
  });
  run.timings.emplace_back("estimate", seconds_since(start));
  if (run.estimate->degenerate) log(config, "warning: novel-word rows are affinely dependent");
}

RunResult run_on_corpus(const Corpus& corpus, const PipelineConfig& config) {
  config.validate();
  RunResult run;
  run_split(corpus, config, run);
  run_detect(config, run);
  run_estimate(config, run);
  return run;
}

Eigen::MatrixXd embed_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& kept_words,
                           std::size_t original_words) {
  if (kept_words.size() != static_cast<std::size_t>(m.rows())) {
    throw DimensionError("kept word list differs from row count");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(original_words), m.cols());
  for (std::size_t i = 0; i < kept_words.size(); ++i) {
    if (kept_words[i] >= original_words) throw BoundsError("kept word index out of range");
    out.row(static_cast<Eigen::Index>(kept_words[i])) = m.row(static_cast<Eigen::Index>(i));
  }
  return out;
}

EvalResult evaluate_files(const LabeledMatrix& estimate, const LabeledMatrix& truth) {
  if (estimate.values.cols() != truth.values.cols()) {
    throw DimensionError("estimate has " + std::to_string(estimate.values.cols()) + " topics, truth has " +
                         std::to_string(truth.values.cols()));
  }
  if (!estimate.labels.empty() && !truth.labels.empty()) {
    std::unordered_map<std::string, std::size_t> where;
    for (std::size_t i = 0; i < truth.labels.size(); ++i) where.emplace(truth.labels[i], i);
    std::vector<std::size_t> rows;
    for (const auto& label : estimate.labels) {
      const auto it = where.find(label);
      if (it == where.end()) throw DimensionError("estimate word '" + label + "' missing from truth");
      rows.push_back(it->second);
    }
    return l1_matched_error(embed_rows(estimate.values, rows, truth.labels.size()), truth.values);
  }
  return l1_matched_error(estimate.values, truth.values);
}

Json run_pipeline(const PipelineConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  const fs::path out_dir = config.out_dir;

  const auto load_start = Clock::now();
  LoadedCorpus loaded = load_corpus(config);
  const double load_time = seconds_since(load_start);

  RunResult run;
  run_split(loaded.corpus, config, run);
  run_detect(config, run);
  run_estimate(config, run);
  run.timings.insert(run.timings.begin(), {"load", load_time});

  const Corpus& corpus = loaded.corpus;
  const std::size_t P = config.projections();
  Json novel_words = Json::array();
  for (std::size_t i : run.novel.indices) {
    novel_words.push_back({{"index", loaded.kept_words[i] + 1}, {"word", corpus.vocab[i]}});
  }

  staged(Stage::Estimate, [&] {
    std::ofstream out = open_output(out_dir / "beta_hat.tsv");
    write_matrix_tsv(out, run.estimate->topics.beta, corpus.vocab);
    Json sidecar;
    sidecar["K"] = run.K;
    sidecar["novel_words"] = novel_words;
    sidecar["eps"] = config.eps;
    sidecar["zeta"] = config.zeta;
    sidecar["P"] = P;
    sidecar["seed"] = config.seed;
    sidecar["residual_stats"] = {{"min", run.estimate->residuals.min},
                                 {"mean", run.estimate->residuals.mean},
                                 {"max", run.estimate->residuals.max}};
    sidecar["degenerate"] = run.estimate->degenerate;
    write_json(out_dir / "beta_hat.json", sidecar);
    std::ofstream sa = open_output(out_dir / "solid_angles.tsv");
    write_solid_angles_tsv(sa, run.profile, run.novel, corpus.vocab);
  });

  Json manifest;
  manifest["config"] = to_json(config);
  manifest["seed"] = config.seed;
  manifest["K"] = run.K;
  manifest["K_estimated"] = run.K_estimated;
  manifest["kernels"] = kernels::active().name;
  manifest["corpus"] = {{"documents", corpus.num_docs},
                        {"words", corpus.num_words},
                        {"original_words", loaded.original_words},
                        {"retained_documents", run.split->num_docs},
                        {"dropped_documents", run.split->dropped_docs},
                        {"silent_words", run.split->silent_words.size()}};
  manifest["novel_words"] = novel_words;

  if (!config.truth.empty()) {
    const auto eval_start = Clock::now();
    manifest["evaluation"] = staged(Stage::Evaluate, [&] {
      std::ifstream in = open_input(config.truth);
      const LabeledMatrix truth = read_matrix_tsv(in);
      LabeledMatrix est{run.estimate->topics.beta, corpus.vocab};
      if (truth.labels.empty()) {
        est.values = embed_rows(est.values, loaded.kept_words, loaded.original_words);
        est.labels.clear();
      }
      EvalResult res = evaluate_files(est, truth);
      // Novel recall against the truth's own novel sets.
      const SeparabilityResult sep = separability_check(truth.values);
      std::vector<std::size_t> selected;
      std::unordered_map<std::string, std::size_t> where;
      for (std::size_t i = 0; i < truth.labels.size(); ++i) where.emplace(truth.labels[i], i);
      for (std::size_t i : run.novel.indices) {
        if (truth.labels.empty()) {
          selected.push_back(loaded.kept_words[i]);
        } else if (const auto it = where.find(corpus.vocab[i]); it != where.end()) {
          selected.push_back(it->second);
        }
      }
      if (sep.novel_sets.size() == run.K) res.novel_recall = novel_recovery(selected, sep.novel_sets);
      return to_json(res);
    });
    run.timings.emplace_back("evaluate", seconds_since(eval_start));
  }

  Json timings = Json::object();
  for (const auto& [stage, secs] : run.timings) timings[stage] = secs;
  manifest["timings"] = timings;
  manifest["artifacts"] = {"beta_hat.tsv", "beta_hat.json", "solid_angles.tsv", "run.json"};
  staged(Stage::Estimate, [&] { write_json(out_dir / "run.json", manifest); });
  return manifest;
}

std::string timing_report(const Json& manifest) {
  std::ostringstream out;
  out << "stage\tseconds\n";
  if (!manifest.contains("timings")) return out.str();
  static const char* order[] = {"load", "split", "detect", "estimate", "evaluate"};
  const Json& t = manifest["timings"];
  double total = 0.0;
  char buf[64];
  for (const char* stage : order) {
    if (!t.contains(stage)) continue;
    const double s = t[stage].get<double>();
    total += s;
    std::snprintf(buf, sizeof buf, "%.6f", s);
    out << stage << '\t' << buf << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.6f", total);
  out << "total\t" << buf << '\n';
  return out.str();
}

}  // namespace rptopic
