#include "tamlearn/learner.hpp"

#include <sstream>

#include "tamlearn/error.hpp"
#include "tamlearn/utf8.hpp"

namespace tamlearn {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Knn: return "knn";
    case Method::DecisionList: return "dlist";
    case Method::MaxEnt: return "maxent";
    case Method::Svm: return "svm";
    case Method::Baseline: return "baseline";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  if (name == "knn") return Method::Knn;
  if (name == "dlist") return Method::DecisionList;
  if (name == "maxent") return Method::MaxEnt;
  if (name == "svm") return Method::Svm;
  if (name == "baseline") return Method::Baseline;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected knn, dlist, maxent, svm, baseline)");
}

std::string LearnerSpec::row_name() const {
  std::ostringstream os;
  switch (method) {
    case Method::Knn: os << "knn (k=" << k << ")"; break;
    case Method::DecisionList: os << "decision list"; break;
    case Method::MaxEnt: os << "max. ent."; break;
    case Method::Svm: os << "support vec. (d=" << svm.degree << ")"; break;
    case Method::Baseline: os << "baseline"; break;
  }
  return os.str();
}

void validate(const LearnerSpec& spec, FeatureSet mode) {
  switch (spec.method) {
    case Method::Knn:
      if (mode != FeatureSet::Suffix) {
        throw ConfigError("knn is only defined for feature set 2: similarity over whole-sentence morphemes "
                          "(feature sets 1 and 3) is not defined");
      }
      if (spec.k == 0) throw ConfigError("knn: k must be at least 1");
      break;
    case Method::Svm:
      if (spec.svm.degree != 1 && spec.svm.degree != 2) throw ConfigError("svm: d must be 1 or 2");
      if (!(spec.svm.C > 0.0)) throw ConfigError("svm: C must be positive");
      break;
    case Method::MaxEnt:
      if (!(spec.maxent.tol > 0.0)) throw ConfigError("maxent: tol must be positive");
      break;
    case Method::DecisionList:
    case Method::Baseline:
      break;
  }
}

std::string baseline_classify(std::string_view sentence) {
  return utf8::suffix(sentence, 1) == "た" ? "past" : "present";
}

std::string TrainedModel::predict(const Example& example) const {
  return std::visit(
      [&](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BaselineModel>) {
          return baseline_classify(suffix_source(example.sentence, spec.features));
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          return m.classify(example.sentence).label;
        } else {
          return m.classify(example).label;
        }
      },
      model);
}

TrainedModel train(const LearnerSpec& spec, const Dataset& data, FeatureSet mode,
                   const std::vector<std::string>& label_universe, unsigned threads) {
  validate(spec, mode);
  TrainedModel out{spec, mode, BaselineModel{}};
  switch (spec.method) {
    case Method::Knn: out.model = KnnModel(data, spec.k, spec.features); break;
    case Method::DecisionList: out.model = train_declist(data, mode, spec.features); break;
    case Method::MaxEnt: out.model = train_maxent(data, mode, spec.maxent, spec.features); break;
    case Method::Svm:
      out.model = train_pairwise(data, mode, spec.svm, spec.features, label_universe, threads);
      break;
    case Method::Baseline: break;
  }
  return out;
}

}  // namespace tamlearn
