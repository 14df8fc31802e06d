#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tamlearn/corpus.hpp"
#include "tamlearn/features.hpp"

namespace tamlearn {

inline constexpr std::size_t kMaxSimilarity = 10;

/// Length of the longest common trailing character sequence of `a` and `b`,
/// capped at `cap`.
std::size_t similarity(std::string_view a, std::string_view b, std::size_t cap = kMaxSimilarity);

/// k-nearest-neighbour model over sentence-final character matches. Only
/// the last `cap` characters of each training sentence are retained.
class KnnModel {
 public:
  KnnModel(const Dataset& train, std::size_t k, const FeatureOptions& opts = {});
  KnnModel(std::vector<std::u32string> reversed_tails, std::vector<std::size_t> labels, LabelSet label_set,
           std::size_t k, FeatureOptions opts);

  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return tails_.size(); }
  const LabelSet& labels() const noexcept { return label_set_; }
  const FeatureOptions& options() const noexcept { return opts_; }

  /// Training tails, last character first.
  const std::vector<std::u32string>& reversed_tails() const noexcept { return tails_; }
  const std::vector<std::size_t>& label_indices() const noexcept { return labels_; }

  struct Prediction {
    std::string label;
    std::size_t threshold = 0;   // similarity of the k-th neighbour
    std::size_t voters = 0;      // >= k; > k only on a tie at the threshold
    std::vector<std::size_t> votes;  // per label index
  };

  Prediction classify(std::string_view sentence) const;

 private:
  std::vector<std::u32string> tails_;
  std::vector<std::size_t> labels_;
  LabelSet label_set_;
  std::size_t k_;
  FeatureOptions opts_;
};

inline KnnModel train_knn(const Dataset& train, std::size_t k, const FeatureOptions& opts = {}) {
  return KnnModel(train, k, opts);
}

inline std::string classify_knn(const KnnModel& model, std::string_view sentence) {
  return model.classify(sentence).label;
}

}  // namespace tamlearn
