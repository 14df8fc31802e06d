#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tamlearn/corpus.hpp"

namespace tamlearn {

enum class FeatureKind : std::uint8_t { Suffix, Token };

/// A suffix n-gram or a token. Suffix and token features with equal text
/// are different features.
struct Feature {
  FeatureKind kind = FeatureKind::Token;
  std::string text;
  std::size_t n = 0;  // scalar-value length, suffix features only

  friend bool operator==(const Feature&, const Feature&) = default;
  /// Orders by text first, then kind.
  friend bool operator<(const Feature& a, const Feature& b) {
    if (a.text != b.text) return a.text < b.text;
    return a.kind < b.kind;
  }
};

std::string to_string(const Feature& f);

using FeatureId = std::uint32_t;

/// Sorted, duplicate-free list of interned feature ids. Features are binary,
/// so the inner product of two vectors is the size of their intersection.
class FeatureVector {
 public:
  FeatureVector() = default;
  /// Sorts and deduplicates `ids`.
  explicit FeatureVector(std::vector<FeatureId> ids);

  const std::vector<FeatureId>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(FeatureId id) const;

  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<FeatureId> ids_;
};

/// |a ∩ b| by merge.
std::size_t dot(const FeatureVector& a, const FeatureVector& b) noexcept;

FeatureVector set_union(const FeatureVector& a, const FeatureVector& b);

/// Bijective map between features and dense ids starting at 0.
class Vocabulary {
 public:
  FeatureId intern(const Feature& f);
  std::optional<FeatureId> find(const Feature& f) const;
  const Feature& feature(FeatureId id) const { return features_.at(id); }
  std::size_t size() const noexcept { return features_.size(); }
  const std::vector<Feature>& features() const noexcept { return features_; }

 private:
  static std::string key(const Feature& f);

  std::vector<Feature> features_;
  std::unordered_map<std::string, FeatureId> index_;
};

enum class FeatureSet : int {
  Combined = 1,  // suffixes and tokens
  Suffix = 2,    // 1..max_n character suffixes
  Token = 3,     // tokens / morphemes
};

std::string_view to_string(FeatureSet fs);
FeatureSet feature_set_from_int(int n);

using Tokenizer = std::function<std::vector<std::string>(std::string_view)>;

struct FeatureOptions {
  std::size_t max_suffix = 10;
  /// Drop trailing sentence punctuation before taking suffixes.
  bool strip_terminal_punct = false;
  /// Used for examples without supplied tokens; whitespace split if empty.
  Tokenizer tokenizer;
};

/// Splits on Unicode whitespace, dropping empty tokens.
std::vector<std::string> tokenize(std::string_view sentence);
/// Supplied tokens unchanged, otherwise `opts.tokenizer` or whitespace split.
std::vector<std::string> tokenize(const Example& example, const FeatureOptions& opts = {});

/// Sentence text with optional terminal punctuation removed.
std::string_view suffix_source(std::string_view sentence, const FeatureOptions& opts);

/// The suffixes of length 1..min(max_n, length), shortest first.
std::vector<Feature> suffix_ngrams(std::string_view sentence, std::size_t max_n = 10);

/// Raw features of `example` under `mode`, before interning.
std::vector<Feature> features_of(const Example& example, FeatureSet mode, const FeatureOptions& opts = {});

/// Interns new features unless `frozen`; when frozen, unseen features are
/// dropped and the vocabulary is left untouched.
FeatureVector extract(const Example& example, FeatureSet mode, Vocabulary& vocab, bool frozen,
                      const FeatureOptions& opts = {});
FeatureVector extract(const Example& example, FeatureSet mode, const Vocabulary& vocab,
                      const FeatureOptions& opts = {});

}  // namespace tamlearn
