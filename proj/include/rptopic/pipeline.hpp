#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rptopic/corpus.hpp"
#include "rptopic/error.hpp"
#include "rptopic/io.hpp"
#include "rptopic/novel_detect.hpp"
#include "rptopic/projector.hpp"
#include "rptopic/regression.hpp"

namespace rptopic {

enum class Stage { Usage, Input, Split, Detect, Estimate, Evaluate, Conditions, Generate };

// Process exit status for a failure in the given stage; 0 is success.
int exit_code(Stage stage);
const char* stage_name(Stage stage);

class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& what)
      : Error(std::string(stage_name(stage)) + ": " + what), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

struct PipelineConfig {
  std::optional<std::size_t> K;  // empty: estimate K
  std::size_t k_max = 20;
  std::size_t P = 0;  // 0: 150 per topic (per k_max when K is estimated)
  double zeta = kDefaultZeta;
  double eps = kDefaultEps;
  double tau = 0.0;
  std::uint64_t seed = 0;
  std::size_t shards = 1;
  std::size_t min_df = 0;
  std::size_t threads = 0;
  bool verbose = false;

  std::string docword;
  std::string vocab;
  std::string stopwords;
  std::string truth;  // ground-truth topic TSV, optional
  std::string out_dir = ".";

  void validate() const;  // throws StageError(Usage)
  std::size_t projections() const;
};

Json to_json(const PipelineConfig& config);
// Fills fields present in j; leaves the others untouched.
void merge_config(PipelineConfig& config, const Json& j);

struct LoadedCorpus {
  Corpus corpus;
  std::vector<std::size_t> kept_words;  // original index of each retained word
  std::size_t original_words = 0;
};

LoadedCorpus load_corpus(const PipelineConfig& config);

using Timings = std::vector<std::pair<std::string, double>>;

struct RunResult {
  std::shared_ptr<const SplitCorpus> split;
  std::shared_ptr<const CoocSource> source;
  SolidAngleProfile profile;
  NovelWordSet novel;
  std::size_t K = 0;
  bool K_estimated = false;
  std::optional<TopicEstimate> estimate;
  Timings timings;
};

// Split, then build the co-occurrence source (sharded if shards > 1).
void run_split(const Corpus& corpus, const PipelineConfig& config, RunResult& run);
void run_detect(const PipelineConfig& config, RunResult& run);
void run_estimate(const PipelineConfig& config, RunResult& run);

// split -> detect -> estimate on an in-memory corpus.
RunResult run_on_corpus(const Corpus& corpus, const PipelineConfig& config);

// Full pipeline over files: writes beta_hat.tsv, beta_hat.json,
// solid_angles.tsv and run.json into out_dir. Returns the manifest.
Json run_pipeline(const PipelineConfig& config);

// Per-stage wall time table from a run manifest.
std::string timing_report(const Json& manifest);

// Places estimate row i at row kept_words[i] of a zero matrix with
// original_words rows.
Eigen::MatrixXd embed_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& kept_words,
                           std::size_t original_words);

// Scores an estimate against a truth TSV. Rows are aligned by word label
// when both files carry labels, by position otherwise.
EvalResult evaluate_files(const LabeledMatrix& estimate, const LabeledMatrix& truth);

}  // namespace rptopic
