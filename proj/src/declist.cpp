#include "tamlearn/declist.hpp"

#include <algorithm>
#include <map>

#include "tamlearn/error.hpp"

namespace tamlearn {

DecisionListModel::DecisionListModel(Vocabulary vocab, LabelSet labels, std::vector<Entry> entries, FeatureSet mode,
                                     FeatureOptions opts)
    : vocab_(std::move(vocab)),
      labels_(std::move(labels)),
      entries_(std::move(entries)),
      mode_(mode),
      opts_(std::move(opts)) {
  if (entries_.size() != vocab_.size()) throw ModelError("decision list: one entry per feature required");
  if (labels_.empty()) throw ModelError("decision list: empty label set");
  for (auto& e : entries_) {
    e.total = 0;
    e.best_count = 0;
    for (auto [label, c] : e.counts) {
      if (label >= labels_.size() || c == 0) throw ModelError("decision list: malformed count table");
      e.total += c;
      if (c > e.best_count || (c == e.best_count && labels_.prefer(label, e.best_label))) {
        e.best_count = c;
        e.best_label = label;
      }
    }
    if (e.total == 0) throw ModelError("decision list: feature without observations");
  }
}

double DecisionListModel::probability(FeatureId f, std::size_t label) const {
  const auto& e = entries_.at(f);
  auto it = std::lower_bound(e.counts.begin(), e.counts.end(), label,
                             [](const auto& p, std::size_t l) { return p.first < l; });
  if (it == e.counts.end() || it->first != label) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(e.total);
}

DecisionListModel::Prediction DecisionListModel::classify(const FeatureVector& fv) const {
  const Entry* best = nullptr;
  FeatureId best_id = 0;
  for (auto id : fv) {
    if (id >= entries_.size()) continue;
    const auto& e = entries_[id];
    if (best == nullptr) {
      best = &e;
      best_id = id;
      continue;
    }
    // Compare best_count / total exactly by cross multiplication.
    const auto lhs = e.best_count * best->total;
    const auto rhs = best->best_count * e.total;
    bool better = lhs > rhs;
    if (lhs == rhs) {
      if (e.total != best->total) {
        better = e.total > best->total;
      } else {
        better = vocab_.feature(id) < vocab_.feature(best_id);
      }
    }
    if (better) {
      best = &e;
      best_id = id;
    }
  }

  Prediction p;
  if (best == nullptr) {
    p.label = labels_.labels()[labels_.majority()];
    p.fallback = true;
    return p;
  }
  p.label = labels_.labels()[best->best_label];
  p.feature = best_id;
  p.probability = static_cast<double>(best->best_count) / static_cast<double>(best->total);
  return p;
}

DecisionListModel::Prediction DecisionListModel::classify(const Example& example) const {
  return classify(extract(example, mode_, vocab_, opts_));
}

DecisionListModel train_declist(const Dataset& train, FeatureSet mode, const FeatureOptions& opts) {
  if (train.empty()) throw TrainingError("decision list: empty training set");
  const auto& labels = train.label_inventory();
  Vocabulary vocab;
  std::vector<std::map<std::size_t, std::size_t>> counts;
  for (const auto& ex : train.examples()) {
    const auto label = *labels.index_of(ex.label);
    const auto fv = extract(ex, mode, vocab, false, opts);
    counts.resize(vocab.size());
    for (auto id : fv) ++counts[id][label];
  }
  std::vector<DecisionListModel::Entry> entries(counts.size());
  for (std::size_t f = 0; f < counts.size(); ++f) {
    entries[f].counts.assign(counts[f].begin(), counts[f].end());
  }
  return DecisionListModel(std::move(vocab), labels, std::move(entries), mode, opts);
}

}  // namespace tamlearn
