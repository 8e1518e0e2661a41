#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <unordered_map>

#include <CLI11.hpp>

#include "rptopic/conditions.hpp"
#include "rptopic/eval.hpp"
#include "rptopic/io.hpp"
#include "rptopic/pipeline.hpp"
#include "rptopic/synthgen.hpp"

namespace fs = std::filesystem;
using namespace rptopic;

namespace {

struct GenerateArgs {
  std::size_t words = 500;
  std::size_t topics = 5;
  std::size_t docs = 1000;
  std::size_t doc_length = 100;
  double alpha = 0.03;
  double concentration = 1.0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out = ".";
};

struct EvaluateArgs {
  std::string estimate;
  std::string truth;
  std::string novel;
  std::string per_topic;
  std::string out;
};

struct ConditionsArgs {
  std::string matrix;
  double support_tol = kSupportTol;
  std::string out;
};

void add_corpus_options(CLI::App* app, PipelineConfig& c) {
  app->add_option("--docword", c.docword, "UCI docword file")->required()->check(CLI::ExistingFile);
  app->add_option("--vocab", c.vocab, "Vocabulary file, one token per line")->check(CLI::ExistingFile);
  app->add_option("--stopwords", c.stopwords, "Stop-word file, one token per line")->check(CLI::ExistingFile);
  app->add_option("--min-df", c.min_df, "Drop words in at most this many documents");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--shards", c.shards, "Document shards for the co-occurrence projections");
  app->add_option("--threads", c.threads, "Worker threads (0: RPTOPIC_THREADS or all cores)");
  app->add_option("--out", c.out_dir, "Output directory");
  app->add_flag("-v,--verbose", c.verbose, "Log progress to stderr");
}

void add_detect_options(CLI::App* app, PipelineConfig& c, std::size_t& k, bool& estimate_k) {
  app->add_option("--K", k, "Number of topics");
  app->add_flag("--estimate-K", estimate_k, "Estimate the number of topics");
  app->add_option("--k-max", c.k_max, "Upper bound on K when estimating it");
  app->add_option("--P", c.P, "Random projections (default 150 per topic)");
  app->add_option("--zeta", c.zeta, "Clustering radius for same-topic novel words");
  app->add_option("--tau", c.tau, "Solid-angle threshold when estimating K");
}

void resolve_k(PipelineConfig& c, std::size_t k, bool estimate_k) {
  if (estimate_k == (k > 0)) throw StageError(Stage::Usage, "give exactly one of --K and --estimate-K");
  if (k > 0) c.K = k;
}

Json novel_json(const RunResult& run, const LoadedCorpus& loaded) {
  Json words = Json::array();
  for (std::size_t i : run.novel.indices) {
    words.push_back({{"index", loaded.kept_words[i] + 1}, {"word", loaded.corpus.vocab[i]}});
  }
  return words;
}

int cmd_generate(const GenerateArgs& a) {
  try {
    const fs::path out = a.out;
    const TopicMatrix beta0 = dirichlet_topics(a.words, a.topics, a.concentration, a.seed);
    const TopicMatrix beta = make_separable(beta0);
    const GroundTruth gt = make_ground_truth(beta, MixingModel::symmetric(a.topics, a.alpha));
    Corpus corpus = sample_corpus(gt, a.docs, a.doc_length, a.seed, a.threads);
    std::vector<std::string> vocab;
    // Same labels as an unlabeled corpus gets, so truth files line up without --vocab.
    for (std::size_t i = 0; i < a.words + a.topics; ++i) vocab.push_back("word" + std::to_string(i + 1));
    corpus.vocab = vocab;

    std::ofstream docword = open_output(out / "docword.txt");
    write_uci(corpus, docword);
    std::ofstream vocab_out = open_output(out / "vocab.txt");
    write_vocab(corpus, vocab_out);
    std::ofstream beta_out = open_output(out / "beta.tsv");
    write_matrix_tsv(beta_out, beta.beta, vocab);

    Json model;
    model["W"] = a.words + a.topics;
    model["base_words"] = a.words;
    model["K"] = a.topics;
    model["M"] = a.docs;
    model["N"] = a.doc_length;
    model["alpha"] = a.alpha;
    model["concentration"] = a.concentration;
    model["seed"] = a.seed;
    model["eta"] = gt.eta;
    Json novel = Json::array();
    for (std::size_t k = 0; k < a.topics; ++k) novel.push_back(a.words + k + 1);
    model["novel_words"] = novel;
    write_json(out / "model.json", model);
    return 0;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(Stage::Generate, e.what());
  }
}

int cmd_detect(PipelineConfig c, bool count_only) {
  c.validate();
  const fs::path out = c.out_dir;
  const LoadedCorpus loaded = load_corpus(c);
  RunResult run;
  run_split(loaded.corpus, c, run);
  run_detect(c, run);

  Json j;
  j["K"] = run.K;
  j["K_estimated"] = run.K_estimated;
  j["novel_words"] = novel_json(run, loaded);
  j["config"] = to_json(c);
  Json qhat = Json::array();
  for (std::size_t i : run.novel.indices) qhat.push_back(run.profile.qhat[i]);
  j["novel_qhat"] = qhat;
  try {
    std::ofstream sa = open_output(out / "solid_angles.tsv");
    write_solid_angles_tsv(sa, run.profile, run.novel, loaded.corpus.vocab);
    write_json(out / (count_only ? "estimate_k.json" : "novel.json"), j);
  } catch (const std::exception& e) {
    throw StageError(Stage::Detect, e.what());
  }
  if (count_only) std::cout << run.K << '\n';
  return 0;
}

int cmd_estimate(PipelineConfig c, const std::string& novel_path) {
  Json novel;
  try {
    novel = read_json(novel_path);
  } catch (const std::exception& e) {
    throw StageError(Stage::Input, e.what());
  }
  // Pruning, seed and sharding must match the detect run.
  if (novel.contains("config")) merge_config(c, novel["config"]);
  c.K = novel.at("K").get<std::size_t>();
  c.validate();
  const fs::path out = c.out_dir;
  const LoadedCorpus loaded = load_corpus(c);
  RunResult run;
  run_split(loaded.corpus, c, run);

  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < loaded.corpus.vocab.size(); ++i) where.emplace(loaded.corpus.vocab[i], i);
  for (const Json& w : novel.at("novel_words")) {
    const auto it = where.find(w.at("word").get<std::string>());
    if (it == where.end()) throw StageError(Stage::Input, "novel word " + w.at("word").dump() + " not in corpus");
    run.novel.indices.push_back(it->second);
  }
  run.K = run.novel.size();
  run_estimate(c, run);

  try {
    std::ofstream tsv = open_output(out / "beta_hat.tsv");
    write_matrix_tsv(tsv, run.estimate->topics.beta, loaded.corpus.vocab);
    Json sidecar;
    sidecar["K"] = run.K;
    sidecar["novel_words"] = novel_json(run, loaded);
    sidecar["eps"] = c.eps;
    sidecar["zeta"] = c.zeta;
    sidecar["P"] = c.projections();
    sidecar["seed"] = c.seed;
    sidecar["residual_stats"] = {{"min", run.estimate->residuals.min},
                                 {"mean", run.estimate->residuals.mean},
                                 {"max", run.estimate->residuals.max}};
    sidecar["degenerate"] = run.estimate->degenerate;
    write_json(out / "beta_hat.json", sidecar);
  } catch (const std::exception& e) {
    throw StageError(Stage::Estimate, e.what());
  }
  return 0;
}

int cmd_pipeline(const PipelineConfig& c, bool timing) {
  const Json manifest = run_pipeline(c);
  if (timing) std::cout << timing_report(manifest);
  if (manifest.contains("evaluation")) std::cout << manifest["evaluation"].dump(2) << '\n';
  return 0;
}

int cmd_conditions(const ConditionsArgs& a) {
  try {
    std::ifstream in = open_input(a.matrix);
    const LabeledMatrix m = read_matrix_tsv(in);
    const Json j = to_json(condition_report(m.values, a.support_tol));
    if (a.out.empty()) {
      std::cout << j.dump(2) << '\n';
    } else {
      write_json(a.out, j);
    }
    return 0;
  } catch (const std::exception& e) {
    throw StageError(Stage::Conditions, e.what());
  }
}

int cmd_evaluate(const EvaluateArgs& a) {
  try {
    std::ifstream est_in = open_input(a.estimate);
    std::ifstream truth_in = open_input(a.truth);
    const LabeledMatrix est = read_matrix_tsv(est_in);
    const LabeledMatrix truth = read_matrix_tsv(truth_in);
    EvalResult res = evaluate_files(est, truth);
    if (!a.novel.empty()) {
      const Json novel = read_json(a.novel);
      std::vector<std::size_t> selected;
      std::unordered_map<std::string, std::size_t> where;
      for (std::size_t i = 0; i < truth.labels.size(); ++i) where.emplace(truth.labels[i], i);
      for (const Json& w : novel.at("novel_words")) {
        if (truth.labels.empty()) {
          selected.push_back(w.at("index").get<std::size_t>() - 1);
        } else if (const auto it = where.find(w.at("word").get<std::string>()); it != where.end()) {
          selected.push_back(it->second);
        }
      }
      res.novel_recall = novel_recovery(selected, separability_check(truth.values).novel_sets);
    }
    if (!a.per_topic.empty()) {
      std::ofstream out = open_output(a.per_topic);
      out << "topic\tmatched_column\tl1\n";
      for (std::size_t k = 0; k < res.per_topic.size(); ++k) {
        out << k + 1 << '\t' << res.matching[k] + 1 << '\t' << res.per_topic[k] << '\n';
      }
    }
    const Json j = to_json(res);
    if (a.out.empty()) {
      std::cout << j.dump(2) << '\n';
    } else {
      write_json(a.out, j);
    }
    return 0;
  } catch (const std::exception& e) {
    throw StageError(Stage::Evaluate, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic discovery by random projections of word co-occurrence"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a separable synthetic corpus");
  generate->add_option("--W", gen.words, "Base vocabulary size (K novel words are appended)");
  generate->add_option("--K", gen.topics, "Number of topics");
  generate->add_option("--M", gen.docs, "Number of documents");
  generate->add_option("--N", gen.doc_length, "Tokens per document");
  generate->add_option("--alpha", gen.alpha, "Symmetric Dirichlet prior on topic weights");
  generate->add_option("--concentration", gen.concentration, "Dirichlet concentration of base topic columns");
  generate->add_option("--seed", gen.seed, "Master seed");
  generate->add_option("--threads", gen.threads, "Worker threads");
  generate->add_option("--out", gen.out, "Output directory");

  PipelineConfig detect_cfg;
  std::size_t detect_k = 0;
  bool detect_auto = false;
  auto* detect = app.add_subcommand("detect", "Estimate solid angles and select novel words");
  add_corpus_options(detect, detect_cfg);
  add_detect_options(detect, detect_cfg, detect_k, detect_auto);

  PipelineConfig est_cfg;
  std::string novel_path;
  auto* estimate = app.add_subcommand("estimate", "Estimate topics from a detected novel-word set");
  add_corpus_options(estimate, est_cfg);
  estimate->add_option("--novel", novel_path, "novel.json from detect")->required()->check(CLI::ExistingFile);
  estimate->add_option("--eps", est_cfg.eps, "Regression tolerance");

  PipelineConfig pipe_cfg;
  std::size_t pipe_k = 0;
  bool pipe_auto = false;
  bool timing = false;
  auto* pipeline = app.add_subcommand("pipeline", "Split, detect, estimate and optionally evaluate");
  add_corpus_options(pipeline, pipe_cfg);
  add_detect_options(pipeline, pipe_cfg, pipe_k, pipe_auto);
  pipeline->add_option("--eps", pipe_cfg.eps, "Regression tolerance");
  pipeline->add_option("--truth", pipe_cfg.truth, "Ground-truth topic TSV")->check(CLI::ExistingFile);
  pipeline->add_flag("--timing", timing, "Print the stage timing table");

  ConditionsArgs cond;
  auto* conditions = app.add_subcommand("conditions", "Condition numbers and separability of a matrix");
  conditions->add_option("--matrix", cond.matrix, "Matrix TSV")->required()->check(CLI::ExistingFile);
  conditions->add_option("--support-tol", cond.support_tol, "Zero threshold for support detection");
  conditions->add_option("--out", cond.out, "Write the JSON report here instead of stdout");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Matched l1 error of an estimate against ground truth");
  evaluate->add_option("--estimate", ev.estimate, "Estimated topic TSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", ev.truth, "Ground-truth topic TSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--novel", ev.novel, "novel.json to score novel-word recovery")->check(CLI::ExistingFile);
  evaluate->add_option("--per-topic", ev.per_topic, "Write per-topic errors as TSV");
  evaluate->add_option("--out", ev.out, "Write the JSON result here instead of stdout");

  PipelineConfig k_cfg;
  auto* estimate_k = app.add_subcommand("estimate-k", "Estimate the number of topics");
  add_corpus_options(estimate_k, k_cfg);
  estimate_k->add_option("--k-max", k_cfg.k_max, "Upper bound on K");
  estimate_k->add_option("--P", k_cfg.P, "Random projections (default 150 per k-max)");
  estimate_k->add_option("--zeta", k_cfg.zeta, "Clustering radius");
  estimate_k->add_option("--tau", k_cfg.tau, "Solid-angle threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(Stage::Usage);
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*detect) {
      resolve_k(detect_cfg, detect_k, detect_auto);
      return cmd_detect(detect_cfg, false);
    }
    if (*estimate) return cmd_estimate(est_cfg, novel_path);
    if (*pipeline) {
      resolve_k(pipe_cfg, pipe_k, pipe_auto);
      return cmd_pipeline(pipe_cfg, timing);
    }
    if (*conditions) return cmd_conditions(cond);
    if (*evaluate) return cmd_evaluate(ev);
    if (*estimate_k) return cmd_detect(k_cfg, true);
  } catch (const StageError& e) {
    std::cerr << "rptopic: " << e.what() << '\n';
    return exit_code(e.stage());
  } catch (const std::exception& e) {
    std::cerr << "rptopic: " << e.what() << '\n';
    return 1;
  }
  return exit_code(Stage::Usage);
}
