// tamlearn: train, evaluate and compare tense/aspect/modality classifiers.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "tamlearn/error.hpp"
#include "tamlearn/experiment.hpp"
#include "tamlearn/synthetic.hpp"

using tamlearn::ExperimentConfig;

namespace {

void add_method_options(CLI::App* cmd, ExperimentConfig& c, std::string& method, std::string& bias) {
  cmd->add_option("--method", method, "knn, dlist, maxent, svm or baseline")
      ->check(CLI::IsMember({"knn", "dlist", "maxent", "svm", "baseline"}));
  cmd->add_option("--features", c.feature_set, "Feature set: 1 (suffixes+tokens), 2 (suffixes), 3 (tokens)")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--k", c.k, "Neighbours for knn")->check(CLI::PositiveNumber);
  cmd->add_option("--d", c.d, "Polynomial kernel degree for svm (1 or 2)");
  cmd->add_option("--C", c.C, "Soft-margin constant for svm")->check(CLI::PositiveNumber);
  cmd->add_option("--svm-bias", bias, "Threshold rule for svm: extremes (default) or dual")
      ->check(CLI::IsMember({"extremes", "dual"}));
  cmd->add_option("--maxent-tol", c.maxent_tol, "Maxent stopping tolerance (fraction of examples)");
  cmd->add_option("--maxent-max-iters", c.maxent_max_iters, "Maxent iteration cap");
  cmd->add_option("--maxent-prior-variance", c.maxent_prior_variance, "Gaussian prior variance (off by default)");
  cmd->add_option("--max-suffix", c.max_suffix, "Longest suffix n-gram")->check(CLI::PositiveNumber);
  cmd->add_flag("--strip-punct", c.strip_terminal_punct, "Drop sentence-final punctuation before suffixes");
  cmd->add_option("--threads", c.threads, "Worker threads (results do not depend on it)");
}

void add_report_options(CLI::App* cmd, ExperimentConfig& c, std::string& format) {
  cmd->add_option("--output,-o", c.output, "Report path (default: stdout)");
  cmd->add_option("--format", format, "jsonl or table")->check(CLI::IsMember({"jsonl", "table"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tense/aspect/modality category classification experiments"};
  app.require_subcommand(1);

  ExperimentConfig c;
  std::string method = "svm";
  std::string format = "jsonl";
  std::string bias = "extremes";
  std::optional<std::size_t> n_plus, n_minus;

  auto* train = app.add_subcommand("train", "Train a model on a corpus and save it");
  add_method_options(train, c, method, bias);
  train->add_option("--input,-i", c.input, "Training corpus")->required();
  train->add_option("--model,-m", c.model, "Model output path")->required();
  train->add_option("--output,-o", c.output, "Training summary path (default: stdout)");

  auto* eval = app.add_subcommand("eval", "Evaluate a saved model (or the baseline) on a corpus");
  add_method_options(eval, c, method, bias);
  add_report_options(eval, c, format);
  eval->add_option("--input,-i", c.input, "Test corpus")->required();
  eval->add_option("--model,-m", c.model, "Saved model");

  auto* cv = app.add_subcommand("cv", "Cross-validation (open test), optionally with the closed test");
  add_method_options(cv, c, method, bias);
  add_report_options(cv, c, format);
  cv->add_option("--input,-i", c.input, "Corpus")->required();
  cv->add_option("--folds", c.folds, "Number of folds");
  cv->add_option("--seed", c.seed, "Fold shuffle seed");
  cv->add_flag("--closed", c.closed, "Also report the closed test");
  cv->add_flag("--all", c.all, "Run the full method x feature-set grid");

  auto* cross = app.add_subcommand("cross-domain", "Train on one corpus, test on another");
  add_method_options(cross, c, method, bias);
  add_report_options(cross, c, format);
  cross->add_option("--train-input", c.train_input, "Training corpus")->required();
  cross->add_option("--input,-i", c.input, "Test corpus")->required();
  cross->add_option("--folds", c.folds, "Folds for examples shared by both corpora");
  cross->add_option("--seed", c.seed, "Fold shuffle seed");

  auto* analyze = app.add_subcommand("analyze", "Sign test between two feature sets and effective features");
  add_method_options(analyze, c, method, bias);
  add_report_options(analyze, c, format);
  analyze->add_option("--input,-i", c.input, "Corpus");
  analyze->add_option("--folds", c.folds, "Number of folds");
  analyze->add_option("--seed", c.seed, "Fold shuffle seed");
  analyze->add_option("--compare-features", c.compare_feature_set, "Feature set of the second system")
      ->check(CLI::Range(1, 3));
  analyze->add_option("--effective-features", c.effective_feature_set, "Feature set searched for effective features")
      ->check(CLI::Range(1, 3));
  analyze->add_option("--level", c.level, "Significance level");
  analyze->add_option("--n-plus", n_plus, "Sign test only: examples where system A alone is right");
  analyze->add_option("--n-minus", n_minus, "Sign test only: examples where system B alone is right");

  auto* dist = app.add_subcommand("distribution", "Category occurrence rates of a corpus");
  add_report_options(dist, c, format);
  dist->add_option("--input,-i", c.input, "Corpus")->required();

  std::string synth_kind = "adverb";
  std::size_t synth_size = 2000;
  double adverb_rate = 0.2;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
  synth->add_option("--kind", synth_kind, "adverb, domain, domain-swapped or dictionary")
      ->check(CLI::IsMember({"adverb", "domain", "domain-swapped", "dictionary"}));
  synth->add_option("--size", synth_size, "Number of sentences")->check(CLI::PositiveNumber);
  synth->add_option("--adverb-rate", adverb_rate, "Share of sentences with a label-changing adverb (adverb kind)");
  synth->add_option("--seed", c.seed, "Generator seed");
  synth->add_option("--output,-o", c.output, "Corpus path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(tamlearn::ExitCode::Usage);
  }

  c.command = app.get_subcommands().front()->get_name();
  if (c.command == "synth") {
    namespace syn = tamlearn::synthetic;
    try {
      tamlearn::Dataset data;
      if (synth_kind == "adverb") {
        data = syn::adverb_corpus({synth_size, adverb_rate, c.seed});
      } else if (synth_kind == "dictionary") {
        data = syn::dictionary_corpus(synth_size, c.seed);
      } else {
        data = syn::domain_corpus({synth_size, synth_kind == "domain-swapped", c.seed});
      }
      tamlearn::write_corpus(data, c.output);
    } catch (const tamlearn::Error& e) {
      std::cerr << "tamlearn: " << e.what() << '\n';
      return static_cast<int>(tamlearn::ExitCode::Data);
    }
    return 0;
  }
  c.method = tamlearn::method_from_string(method);
  c.svm_bias = tamlearn::bias_rule_from_string(bias);
  c.format = format == "table" ? tamlearn::ReportFormat::Table : tamlearn::ReportFormat::Jsonl;
  c.n_plus = n_plus;
  c.n_minus = n_minus;
  return tamlearn::run(c, std::cout, std::cerr);
}
