#include "tamlearn/model_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "tamlearn/error.hpp"
#include "tamlearn/utf8.hpp"

namespace tamlearn {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "tamlearn-model";
constexpr int kVersion = 1;

json labels_to_json(const LabelSet& labels) {
  json out = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) out.push_back({labels.labels()[i], labels.counts()[i]});
  return out;
}

LabelSet labels_from_json(const json& doc) {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : doc) counts[e.at(0).get<std::string>()] = e.at(1).get<std::size_t>();
  LabelSet out(std::move(counts));
  if (out.size() != doc.size()) throw ModelError("duplicate label in model file");
  return out;
}

json vector_to_json(const FeatureVector& fv) { return fv.ids(); }

FeatureVector vector_from_json(const json& doc) { return FeatureVector(doc.get<std::vector<FeatureId>>()); }

json binary_to_json(const BinarySvmModel& m) {
  json sv = json::array();
  for (const auto& x : m.support_vectors()) sv.push_back(vector_to_json(x));
  return {{"b", m.bias()}, {"C", m.C()}, {"d", m.degree()}, {"sv", sv}, {"y", m.y()}, {"alpha", m.alpha()}};
}

BinarySvmModel binary_from_json(const json& doc) {
  std::vector<FeatureVector> sv;
  for (const auto& x : doc.at("sv")) sv.push_back(vector_from_json(x));
  return BinarySvmModel(std::move(sv), doc.at("y").get<std::vector<int>>(), doc.at("alpha").get<std::vector<double>>(),
                        doc.at("b").get<double>(), doc.at("d").get<int>(), doc.at("C").get<double>());
}

json params_to_json(const LearnerSpec& s) {
  json p = {{"max_suffix", s.features.max_suffix}, {"strip_terminal_punct", s.features.strip_terminal_punct}};
  switch (s.method) {
    case Method::Knn: p["k"] = s.k; break;
    case Method::Svm:
      p["C"] = s.svm.C;
      p["d"] = s.svm.degree;
      p["eps"] = s.svm.eps;
      p["bias"] = std::string(to_string(s.svm.bias));
      break;
    case Method::MaxEnt:
      p["tol"] = s.maxent.tol;
      p["max_iters"] = s.maxent.max_iters;
      p["prior_variance"] = s.maxent.prior_variance ? json(*s.maxent.prior_variance) : json(nullptr);
      break;
    default: break;
  }
  return p;
}

LearnerSpec spec_from_json(const json& doc) {
  LearnerSpec s;
  s.method = method_from_string(doc.at("method").get<std::string>());
  const auto& p = doc.at("params");
  s.features.max_suffix = p.value("max_suffix", std::size_t{10});
  s.features.strip_terminal_punct = p.value("strip_terminal_punct", false);
  if (p.contains("k")) s.k = p.at("k").get<std::size_t>();
  if (p.contains("C")) s.svm.C = p.at("C").get<double>();
  if (p.contains("d")) s.svm.degree = p.at("d").get<int>();
  if (p.contains("eps")) s.svm.eps = p.at("eps").get<double>();
  if (p.contains("bias")) s.svm.bias = bias_rule_from_string(p.at("bias").get<std::string>());
  if (p.contains("tol")) s.maxent.tol = p.at("tol").get<double>();
  if (p.contains("max_iters")) s.maxent.max_iters = p.at("max_iters").get<std::size_t>();
  if (p.contains("prior_variance") && !p.at("prior_variance").is_null()) {
    s.maxent.prior_variance = p.at("prior_variance").get<double>();
  }
  return s;
}

}  // namespace

json vocabulary_to_json(const Vocabulary& vocab) {
  json out = json::array();
  for (const auto& f : vocab.features()) {
    if (f.kind == FeatureKind::Suffix) {
      out.push_back({"S", f.text});
    } else {
      out.push_back({"T", f.text});
    }
  }
  return out;
}

Vocabulary vocabulary_from_json(const json& doc) {
  Vocabulary vocab;
  for (const auto& e : doc) {
    const auto kind = e.at(0).get<std::string>();
    Feature f;
    f.text = e.at(1).get<std::string>();
    if (kind == "S") {
      f.kind = FeatureKind::Suffix;
      f.n = utf8::length(f.text);
    } else if (kind == "T") {
      f.kind = FeatureKind::Token;
    } else {
      throw ModelError("unknown feature kind '" + kind + "'");
    }
    if (vocab.intern(f) + 1 != vocab.size()) throw ModelError("duplicate feature in vocabulary");
  }
  return vocab;
}

json model_to_json(const TrainedModel& model) {
  json doc = {{"format", kFormat},
              {"version", kVersion},
              {"method", std::string(to_string(model.spec.method))},
              {"feature_set", static_cast<int>(model.mode)},
              {"params", params_to_json(model.spec)}};

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, KnnModel>) {
          json tails = json::array();
          for (const auto& t : m.reversed_tails()) tails.push_back(utf8::encode(std::u32string(t.rbegin(), t.rend())));
          doc["labels"] = labels_to_json(m.labels());
          doc["model"] = {{"tails", tails}, {"label_indices", m.label_indices()}};
        } else if constexpr (std::is_same_v<T, DecisionListModel>) {
          json counts = json::array();
          for (const auto& e : m.entries()) counts.push_back(e.counts);
          doc["labels"] = labels_to_json(m.labels());
          doc["vocabulary"] = vocabulary_to_json(m.vocabulary());
          doc["model"] = {{"counts", counts}};
        } else if constexpr (std::is_same_v<T, MaxEntModel>) {
          doc["labels"] = labels_to_json(m.labels());
          doc["vocabulary"] = vocabulary_to_json(m.vocabulary());
          doc["model"] = {{"weights", m.weights()},
                          {"iterations", m.info().iterations},
                          {"residual", m.info().residual},
                          {"stop", std::string(to_string(m.info().stop))}};
        } else if constexpr (std::is_same_v<T, PairwiseModel>) {
          json pairs = json::array();
          for (const auto& p : m.pairs()) {
            json jp = {{"pos", p.positive}, {"neg", p.negative}};
            if (p.model) {
              jp["svm"] = binary_to_json(*p.model);
            } else {
              jp["default"] = p.default_winner;
            }
            pairs.push_back(std::move(jp));
          }
          doc["labels"] = labels_to_json(m.labels());
          doc["vocabulary"] = vocabulary_to_json(m.vocabulary());
          doc["model"] = {{"pairs", pairs}};
        } else {
          doc["model"] = json::object();
        }
      },
      model.model);
  return doc;
}

TrainedModel model_from_json(const json& doc) {
  try {
    if (doc.value("format", "") != kFormat) throw ModelError("not a tamlearn model file");
    if (doc.value("version", 0) != kVersion) throw ModelError("unsupported model file version");
    TrainedModel out;
    out.spec = spec_from_json(doc);
    out.mode = feature_set_from_int(doc.at("feature_set").get<int>());
    const auto& body = doc.at("model");
    const auto& opts = out.spec.features;
    switch (out.spec.method) {
      case Method::Knn: {
        std::vector<std::u32string> tails;
        for (const auto& t : body.at("tails")) {
          auto s = utf8::decode(t.get<std::string>());
          tails.emplace_back(s.rbegin(), s.rend());
        }
        out.model = KnnModel(std::move(tails), body.at("label_indices").get<std::vector<std::size_t>>(),
                             labels_from_json(doc.at("labels")), out.spec.k, opts);
        break;
      }
      case Method::DecisionList: {
        std::vector<DecisionListModel::Entry> entries;
        for (const auto& c : body.at("counts")) {
          DecisionListModel::Entry e;
          e.counts = c.get<std::vector<std::pair<std::size_t, std::size_t>>>();
          entries.push_back(std::move(e));
        }
        out.model = DecisionListModel(vocabulary_from_json(doc.at("vocabulary")), labels_from_json(doc.at("labels")),
                                      std::move(entries), out.mode, opts);
        break;
      }
      case Method::MaxEnt: {
        MaxEntTrainingInfo info;
        info.iterations = body.value("iterations", std::size_t{0});
        info.residual = body.value("residual", 0.0);
        out.model = MaxEntModel(vocabulary_from_json(doc.at("vocabulary")), labels_from_json(doc.at("labels")),
                                body.at("weights").get<std::vector<double>>(), out.mode, opts, std::move(info));
        break;
      }
      case Method::Svm: {
        std::vector<PairwiseModel::Pair> pairs;
        for (const auto& jp : body.at("pairs")) {
          PairwiseModel::Pair p;
          p.positive = jp.at("pos").get<std::size_t>();
          p.negative = jp.at("neg").get<std::size_t>();
          if (jp.contains("svm")) {
            p.model = binary_from_json(jp.at("svm"));
          } else {
            p.default_winner = jp.at("default").get<std::size_t>();
          }
          pairs.push_back(std::move(p));
        }
        out.model = PairwiseModel(vocabulary_from_json(doc.at("vocabulary")), labels_from_json(doc.at("labels")),
                                  std::move(pairs), out.mode, opts, out.spec.svm);
        break;
      }
      case Method::Baseline: out.model = BaselineModel{}; break;
    }
    return out;
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path);
  out << model_to_json(model).dump() << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

}  // namespace tamlearn
