#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tamlearn/corpus.hpp"
#include "tamlearn/features.hpp"

namespace tamlearn {

struct MaxEntOptions {
  double tol = 1e-4;             // stop when max |empirical - expected| <= tol * N
  std::size_t max_iters = 1000;
  double weight_bound = 30.0;    // |lambda| clamp for features that separate perfectly
  std::optional<double> prior_variance;  // Gaussian prior; none by default
  std::size_t history = 10;      // L-BFGS memory
};

enum class StopReason { Converged, IterationCap, Stalled };

std::string_view to_string(StopReason r);

struct MaxEntTrainingInfo {
  std::size_t iterations = 0;
  double residual = 0.0;  // max_{f,a} |empirical - expected| in counts
  StopReason stop = StopReason::Converged;
  std::size_t clamped = 0;  // weights sitting at +-weight_bound
  std::vector<std::string> warnings;
};

/// Conditional exponential model p(a|b) ∝ exp(Σ_f λ[f][a] g_f(b)), one weight
/// per (feature, label) pair. Fitting maximizes the conditional likelihood,
/// whose optimum is the entropy maximizer under the feature-expectation
/// constraints.
class MaxEntModel {
 public:
  MaxEntModel(Vocabulary vocab, LabelSet labels, std::vector<double> weights, FeatureSet mode,
              FeatureOptions opts, MaxEntTrainingInfo info = {});

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const LabelSet& labels() const noexcept { return labels_; }
  /// Row-major, features x labels.
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(FeatureId f, std::size_t label) const { return weights_.at(f * labels_.size() + label); }
  FeatureSet mode() const noexcept { return mode_; }
  const FeatureOptions& options() const noexcept { return opts_; }
  const MaxEntTrainingInfo& info() const noexcept { return info_; }

  std::vector<double> distribution(const FeatureVector& fv) const;

  struct Prediction {
    std::string label;
    std::vector<double> distribution;  // per label index
  };

  Prediction classify(const FeatureVector& fv) const;
  Prediction classify(const Example& example) const;

 private:
  Vocabulary vocab_;
  LabelSet labels_;
  std::vector<double> weights_;
  FeatureSet mode_;
  FeatureOptions opts_;
  MaxEntTrainingInfo info_;
};

MaxEntModel train_maxent(const Dataset& train, FeatureSet mode, const MaxEntOptions& options = {},
                         const FeatureOptions& opts = {});

/// Lower-level entry point over pre-extracted contexts. `labels[i]` indexes
/// `label_set`; feature ids must be below `vocab.size()`.
MaxEntModel train_maxent(const std::vector<FeatureVector>& contexts, const std::vector<std::size_t>& labels,
                         Vocabulary vocab, LabelSet label_set, FeatureSet mode, const MaxEntOptions& options = {},
                         const FeatureOptions& opts = {});

inline MaxEntModel::Prediction classify_maxent(const MaxEntModel& model, const FeatureVector& fv) {
  return model.classify(fv);
}

}  // namespace tamlearn
