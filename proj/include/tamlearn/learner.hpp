#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tamlearn/corpus.hpp"
#include "tamlearn/declist.hpp"
#include "tamlearn/features.hpp"
#include "tamlearn/knn.hpp"
#include "tamlearn/maxent.hpp"
#include "tamlearn/svm.hpp"

namespace tamlearn {

enum class Method { Knn, DecisionList, MaxEnt, Svm, Baseline };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct LearnerSpec {
  Method method = Method::Svm;
  std::size_t k = 1;           // knn
  SvmOptions svm;              // svm
  MaxEntOptions maxent;        // maxent
  FeatureOptions features;

  /// Table row name, e.g. "knn (k=3)" or "support vec. (d=1)".
  std::string row_name() const;
};

/// Throws ConfigError for combinations the method does not support: k-NN is
/// defined only over sentence-final strings (feature set 2).
void validate(const LearnerSpec& spec, FeatureSet mode);

/// "past" when the sentence ends in た, otherwise "present".
std::string baseline_classify(std::string_view sentence);

struct BaselineModel {};

using ModelVariant = std::variant<BaselineModel, KnnModel, DecisionListModel, MaxEntModel, PairwiseModel>;

struct TrainedModel {
  LearnerSpec spec;
  FeatureSet mode = FeatureSet::Combined;
  ModelVariant model;

  std::string predict(const Example& example) const;
};

/// `label_universe` is forwarded to the pairwise SVM so CV folds that miss a
/// label still produce a full classifier grid.
TrainedModel train(const LearnerSpec& spec, const Dataset& train, FeatureSet mode,
                   const std::vector<std::string>& label_universe = {}, unsigned threads = 1);

}  // namespace tamlearn
