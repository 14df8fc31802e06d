#include "tamlearn/knn.hpp"

#include <algorithm>
#include <array>

#include "tamlearn/error.hpp"
#include "tamlearn/utf8.hpp"

namespace tamlearn {

namespace {

std::u32string reversed_tail(std::string_view sentence, std::size_t cap) {
  auto tail = utf8::decode(utf8::suffix(sentence, cap));
  std::reverse(tail.begin(), tail.end());
  return tail;
}

std::size_t common_prefix(std::u32string_view a, std::u32string_view b) {
  const auto n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

}  // namespace

std::size_t similarity(std::string_view a, std::string_view b, std::size_t cap) {
  return common_prefix(reversed_tail(a, cap), reversed_tail(b, cap));
}

KnnModel::KnnModel(const Dataset& train, std::size_t k, const FeatureOptions& opts)
    : label_set_(train.label_inventory()), k_(k), opts_(opts) {
  if (k == 0) throw ArgumentError("k must be at least 1");
  if (train.empty()) throw ModelError("k-NN needs a non-empty training set");
  tails_.reserve(train.size());
  labels_.reserve(train.size());
  for (const auto& e : train.examples()) {
    tails_.push_back(reversed_tail(suffix_source(e.sentence, opts_), kMaxSimilarity));
    labels_.push_back(*label_set_.index_of(e.label));
  }
}

KnnModel::KnnModel(std::vector<std::u32string> reversed_tails, std::vector<std::size_t> labels,
                   LabelSet label_set, std::size_t k, FeatureOptions opts)
    : tails_(std::move(reversed_tails)),
      labels_(std::move(labels)),
      label_set_(std::move(label_set)),
      k_(k),
      opts_(std::move(opts)) {
  if (k_ == 0) throw ArgumentError("k must be at least 1");
  if (tails_.empty() || tails_.size() != labels_.size()) throw ModelError("malformed k-NN model");
  for (auto l : labels_) {
    if (l >= label_set_.size()) throw ModelError("k-NN label index out of range");
  }
}

KnnModel::Prediction KnnModel::classify(std::string_view sentence) const {
  if (tails_.empty()) throw ModelError("k-NN model has no training examples");
  const auto query = reversed_tail(suffix_source(sentence, opts_), kMaxSimilarity);

  std::vector<std::size_t> sims(tails_.size());
  std::array<std::size_t, kMaxSimilarity + 1> histogram{};
  for (std::size_t i = 0; i < tails_.size(); ++i) {
    sims[i] = common_prefix(query, tails_[i]);
    ++histogram[sims[i]];
  }

  // Similarity of the k-th ranked example; everything at or above it votes.
  const std::size_t k = std::min(k_, tails_.size());
  std::size_t threshold = kMaxSimilarity;
  for (std::size_t seen = 0;; --threshold) {
    seen += histogram[threshold];
    if (seen >= k || threshold == 0) break;
  }

  Prediction p;
  p.threshold = threshold;
  p.votes.assign(label_set_.size(), 0);
  for (std::size_t i = 0; i < tails_.size(); ++i) {
    if (sims[i] >= threshold) {
      ++p.votes[labels_[i]];
      ++p.voters;
    }
  }
  p.label = label_set_.labels()[label_set_.argmax(std::span<const std::size_t>(p.votes))];
  return p;
}

}  // namespace tamlearn
