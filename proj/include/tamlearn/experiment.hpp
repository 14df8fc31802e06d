#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tamlearn/eval.hpp"
#include "tamlearn/learner.hpp"

namespace tamlearn {

enum class ExitCode : int { Ok = 0, Usage = 1, Data = 2, Training = 3 };

enum class ReportFormat { Jsonl, Table };

struct ExperimentConfig {
  std::string command = "cv";  // train, eval, cv, cross-domain, analyze, distribution
  Method method = Method::Svm;
  int feature_set = 1;
  std::size_t k = 1;
  int d = 1;
  double C = 1.0;
  BiasRule svm_bias = BiasRule::Extremes;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  double maxent_tol = 1e-4;
  std::size_t maxent_max_iters = 1000;
  std::optional<double> maxent_prior_variance;
  std::size_t max_suffix = 10;
  bool strip_terminal_punct = false;
  bool closed = false;
  bool all = false;  // cv: full method x feature-set grid
  unsigned threads = 1;

  // analyze: system A uses feature_set, system B compare_feature_set. n_plus
  // counts examples only A gets right; those examples are searched for
  // effective features.
  int compare_feature_set = 2;
  int effective_feature_set = 3;
  double level = 0.01;
  std::optional<std::size_t> n_plus;
  std::optional<std::size_t> n_minus;

  std::string input;        // corpus (test corpus for eval / cross-domain)
  std::string train_input;  // cross-domain training corpus
  std::string model;        // model path (train: output, eval: input)
  std::string output;       // report path; stdout when empty
  ReportFormat format = ReportFormat::Jsonl;

  LearnerSpec learner() const;
  FeatureSet mode() const;
  nlohmann::json to_json() const;
};

/// Throws ConfigError on invalid combinations.
void validate(const ExperimentConfig& config);

/// One JSON record per fold plus a summary record carrying `config`.
std::string report_jsonl(const PrecisionReport& report, const nlohmann::json& config);

struct GridCell {
  std::string row;
  FeatureSet mode;
  std::optional<PrecisionReport> open;
  std::optional<PrecisionReport> closed;
};

/// Method x feature-set table, open precision with closed precision in
/// parentheses; "---" marks combinations that are not defined.
std::string precision_table(const std::vector<GridCell>& cells, std::optional<double> baseline);

/// Method rows of the full experimental grid.
std::vector<LearnerSpec> grid_rows(const ExperimentConfig& config);

/// Runs one experiment; the report goes to `config.output` or `out`. Errors
/// are reported on `err` and mapped to exit codes.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace tamlearn
