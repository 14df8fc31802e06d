#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tamlearn/corpus.hpp"
#include "tamlearn/features.hpp"
#include "tamlearn/learner.hpp"

namespace tamlearn {

struct FoldTally {
  int fold = 0;  // -1: examples evaluated by a model trained on all training data
  std::size_t correct = 0;
  std::size_t total = 0;
};

struct PredictionRecord {
  std::size_t index = 0;  // into the evaluated dataset
  std::string gold;
  std::string predicted;

  bool correct() const { return gold == predicted; }
};

/// "Precision" is overall accuracy: correct / total over all predictions.
struct PrecisionReport {
  std::string method;
  FeatureSet mode = FeatureSet::Combined;
  bool closed = false;
  std::size_t n_folds = 0;
  std::uint64_t seed = 0;
  std::vector<FoldTally> folds;
  std::vector<PredictionRecord> predictions;  // sorted by index

  std::size_t correct() const;
  std::size_t total() const;
  double precision() const;
};

/// Open test: every fold is predicted by a model trained on the other folds,
/// with the vocabulary rebuilt from the training portion. Folds are
/// independent and run on up to `threads` workers; the result does not depend
/// on the thread count.
PrecisionReport cross_validate(const LearnerSpec& spec, const Dataset& dataset, const FoldPlan& plan, FeatureSet mode,
                               unsigned threads = 1);

/// Closed test: train and test on the whole dataset.
PrecisionReport closed_test(const LearnerSpec& spec, const Dataset& dataset, FeatureSet mode, unsigned threads = 1);

/// Predicts every example of `test` with an already trained model.
PrecisionReport evaluate(const TrainedModel& model, const Dataset& test);

/// Train on `train`, evaluate on `test`. Test examples that also occur in
/// `train` are evaluated by `n_folds`-fold CV over `train` instead, each one
/// predicted by the model whose training portion excludes it.
PrecisionReport cross_domain_eval(const Dataset& train, const Dataset& test, const LearnerSpec& spec, FeatureSet mode,
                                  std::size_t n_folds = 10, std::uint64_t seed = 0, unsigned threads = 1);

// ---------------------------------------------------------------------------

struct SignTestResult {
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  double p_value = 1.0;
  double level = 0.0;
  bool significant = false;  // p_value < level
  bool exact = true;         // false: normal approximation
};

inline constexpr std::size_t kExactSignTestLimit = 1000;

/// Two-sided sign test of H0: P(+) = 1/2. Exact binomial up to
/// kExactSignTestLimit trials, continuity-corrected normal approximation above.
SignTestResult sign_test(std::size_t n_plus, std::size_t n_minus, double level);
double sign_test_exact_p(std::size_t n_plus, std::size_t n_minus);
double sign_test_normal_p(std::size_t n_plus, std::size_t n_minus);

/// P(X >= k) for X ~ Binomial(n, p).
double binomial_upper_tail(std::size_t n, double p, std::size_t k);

struct EffectiveFeature {
  Feature feature;
  std::size_t flip_count = 0;  // examples of flip_set containing the feature
  std::size_t all_count = 0;
  double p_value = 1.0;
};

/// Features over-represented in `flip_set` relative to `all_set` by a
/// one-sided exact binomial test, sorted by flip_set frequency (descending).
std::vector<EffectiveFeature> effective_features(std::span<const Example> flip_set, std::span<const Example> all_set,
                                                 FeatureSet mode, double level = 0.01,
                                                 const FeatureOptions& opts = {});

/// (label, rate) sorted by rate descending, then label.
std::vector<std::pair<std::string, double>> category_distribution(const Dataset& dataset);

/// Per-example agreement of two systems on the same examples.
struct PairedComparison {
  std::size_t a_only = 0;  // A correct, B wrong
  std::size_t b_only = 0;  // B correct, A wrong
  std::vector<std::size_t> b_only_indices;
  std::vector<std::size_t> a_only_indices;
};

PairedComparison compare(const PrecisionReport& a, const PrecisionReport& b);

}  // namespace tamlearn
