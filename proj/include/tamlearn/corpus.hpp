#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tamlearn {

/// One labeled sentence. `tokens`, when present, replaces the default
/// whitespace tokenizer for this sentence.
struct Example {
  std::string label;
  std::string sentence;
  std::optional<std::vector<std::string>> tokens;

  friend bool operator==(const Example&, const Example&) = default;
};

/// Label inventory with the deterministic preference order used to break
/// every vote tie in the library: higher frequency first, then smaller label
/// in byte order.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::map<std::string, std::size_t> counts);

  template <class Range>
  static LabelSet from_labels(const Range& labels) {
    std::map<std::string, std::size_t> counts;
    for (const auto& l : labels) ++counts[std::string(l)];
    return LabelSet(std::move(counts));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  /// Labels in byte order; the position is the label's index.
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  std::size_t total() const noexcept { return total_; }

  std::optional<std::size_t> index_of(std::string_view label) const;
  std::size_t count(std::string_view label) const;

  /// True if label index `a` wins a tie against `b`.
  bool prefer(std::size_t a, std::size_t b) const noexcept {
    if (counts_[a] != counts_[b]) return counts_[a] > counts_[b];
    return a < b;
  }

  /// Index of the most-voted label, ties resolved by `prefer`.
  /// `votes` has one entry per label.
  template <class T>
  std::size_t argmax(std::span<const T> votes) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < votes.size(); ++i) {
      if (votes[i] > votes[best] || (votes[i] == votes[best] && prefer(i, best))) best = i;
    }
    return best;
  }

  /// The most frequent label.
  std::size_t majority() const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Example> examples);

  const std::vector<Example>& examples() const noexcept { return examples_; }
  const LabelSet& label_inventory() const noexcept { return inventory_; }
  std::size_t size() const noexcept { return examples_.size(); }
  bool empty() const noexcept { return examples_.empty(); }
  const Example& operator[](std::size_t i) const { return examples_[i]; }

  /// Examples at `indices`, in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<Example> examples_;
  LabelSet inventory_;
};

/// Parses a corpus document: one `label TAB sentence [TAB tokens]` record per
/// line, tokens space separated. Blank lines and lines starting with `#` are
/// skipped. Throws ParseError / EncodingError naming the 1-based line.
Dataset parse_corpus(std::string_view text);
std::string serialize_corpus(const Dataset& dataset);

Dataset read_corpus(const std::string& path);
void write_corpus(const Dataset& dataset, const std::string& path);

// ---------------------------------------------------------------------------
// Structured category labels.

inline constexpr std::string_view kAuxiliaries[] = {
    "be-able-to", "be-going-to", "can",  "have-to", "had-better", "may",
    "must",       "need",        "ought", "shall",  "used-to",    "will"};

enum class Tense { Present, Past };

struct CategorySpec {
  std::set<std::string> auxiliaries;
  Tense tense = Tense::Present;
  bool progressive = false;
  bool perfect = false;
  bool imperative = false;

  friend bool operator==(const CategorySpec&, const CategorySpec&) = default;
};

/// Parses a `+`-joined descriptor such as "can+past" or "imperative".
CategorySpec parse_category_descriptor(std::string_view label);

/// Canonical descriptor: auxiliaries in table order, then tense, progressive,
/// perfect. Round-trips through parse_category_descriptor.
std::string format_category_descriptor(const CategorySpec& spec);

// ---------------------------------------------------------------------------
// Cross-validation folds.

struct FoldPlan {
  std::size_t n_folds = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // per example

  /// Example indices of fold `k`, ascending.
  std::vector<std::size_t> fold(std::size_t k) const;
  /// Example indices outside fold `k`, ascending.
  std::vector<std::size_t> complement(std::size_t k) const;
  std::vector<std::size_t> fold_sizes() const;
};

/// Seeded Fisher-Yates shuffle followed by round-robin assignment.
FoldPlan split_folds(const Dataset& dataset, std::size_t n_folds, std::uint64_t seed);
FoldPlan split_folds(std::size_t n_examples, std::size_t n_folds, std::uint64_t seed);

}  // namespace tamlearn
