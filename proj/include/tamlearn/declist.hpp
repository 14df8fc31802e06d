#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tamlearn/corpus.hpp"
#include "tamlearn/features.hpp"

namespace tamlearn {

/// Decision list: the single most category-predictive feature present in a
/// context decides the category.
///
/// For every feature f the model keeps the raw co-occurrence counts c(f, a).
/// The occurrence rate p(a|f) = c(f, a) / c(f) is never smoothed.
class DecisionListModel {
 public:
  struct Entry {
    std::size_t total = 0;                                   // c(f)
    std::vector<std::pair<std::size_t, std::size_t>> counts;  // (label index, c(f, a)), by label index
    std::size_t best_label = 0;                              // argmax_a c(f, a), ties by label preference
    std::size_t best_count = 0;
  };

  DecisionListModel(Vocabulary vocab, LabelSet labels, std::vector<Entry> entries, FeatureSet mode,
                    FeatureOptions opts);

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const LabelSet& labels() const noexcept { return labels_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  FeatureSet mode() const noexcept { return mode_; }
  const FeatureOptions& options() const noexcept { return opts_; }

  /// p(a|f); 0 for an unseen (f, a) pair.
  double probability(FeatureId f, std::size_t label) const;

  struct Prediction {
    std::string label;
    std::optional<FeatureId> feature;  // the deciding feature; empty on fallback
    double probability = 0.0;
    bool fallback = false;             // no known feature: global majority
  };

  Prediction classify(const FeatureVector& fv) const;
  Prediction classify(const Example& example) const;

 private:
  Vocabulary vocab_;
  LabelSet labels_;
  std::vector<Entry> entries_;  // indexed by feature id
  FeatureSet mode_;
  FeatureOptions opts_;
};

DecisionListModel train_declist(const Dataset& train, FeatureSet mode, const FeatureOptions& opts = {});

inline std::string classify_declist(const DecisionListModel& model, const FeatureVector& fv) {
  return model.classify(fv).label;
}

}  // namespace tamlearn
