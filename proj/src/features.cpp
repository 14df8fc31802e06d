#include "tamlearn/features.hpp"

#include <algorithm>

#include "tamlearn/error.hpp"
#include "tamlearn/utf8.hpp"

namespace tamlearn {

std::string to_string(const Feature& f) {
  return (f.kind == FeatureKind::Suffix ? "suffix:" : "token:") + f.text;
}

FeatureVector::FeatureVector(std::vector<FeatureId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool FeatureVector::contains(FeatureId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

std::size_t dot(const FeatureVector& a, const FeatureVector& b) noexcept {
  auto i = a.ids().begin(), ie = a.ids().end();
  auto j = b.ids().begin(), je = b.ids().end();
  std::size_t n = 0;
  while (i != ie && j != je) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

FeatureVector set_union(const FeatureVector& a, const FeatureVector& b) {
  std::vector<FeatureId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FeatureVector(std::move(out));
}

std::string Vocabulary::key(const Feature& f) {
  std::string k;
  k.reserve(f.text.size() + 1);
  k.push_back(f.kind == FeatureKind::Suffix ? 'S' : 'T');
  k += f.text;
  return k;
}

FeatureId Vocabulary::intern(const Feature& f) {
  auto [it, inserted] = index_.try_emplace(key(f), static_cast<FeatureId>(features_.size()));
  if (inserted) features_.push_back(f);
  return it->second;
}

std::optional<FeatureId> Vocabulary::find(const Feature& f) const {
  auto it = index_.find(key(f));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(FeatureSet fs) {
  switch (fs) {
    case FeatureSet::Combined: return "1";
    case FeatureSet::Suffix: return "2";
    case FeatureSet::Token: return "3";
  }
  return "?";
}

FeatureSet feature_set_from_int(int n) {
  if (n < 1 || n > 3) throw ConfigError("feature set must be 1, 2 or 3, got " + std::to_string(n));
  return static_cast<FeatureSet>(n);
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  std::string current;
  for (char32_t c : utf8::decode(sentence)) {
    if (utf8::is_space(c)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current += utf8::encode(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<std::string> tokenize(const Example& example, const FeatureOptions& opts) {
  if (example.tokens) return *example.tokens;
  if (opts.tokenizer) return opts.tokenizer(example.sentence);
  return tokenize(example.sentence);
}

std::string_view suffix_source(std::string_view sentence, const FeatureOptions& opts) {
  if (!opts.strip_terminal_punct) return sentence;
  static constexpr std::u32string_view kPunct = U".!?。．！？｡";
  auto offsets = utf8::scalar_offsets(sentence);
  std::size_t end = sentence.size();
  while (!offsets.empty()) {
    auto start = offsets.back();
    auto cp = utf8::decode(sentence.substr(start, end - start));
    if (cp.size() != 1 || kPunct.find(cp[0]) == std::u32string_view::npos) break;
    end = start;
    offsets.pop_back();
  }
  return sentence.substr(0, end);
}

std::vector<Feature> suffix_ngrams(std::string_view sentence, std::size_t max_n) {
  if (max_n == 0) throw ArgumentError("max_n must be at least 1");
  std::vector<Feature> out;
  const auto offsets = utf8::scalar_offsets(sentence);
  const std::size_t n_max = std::min(max_n, offsets.size());
  out.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    out.push_back(Feature{FeatureKind::Suffix, std::string(sentence.substr(offsets[offsets.size() - n])), n});
  }
  return out;
}

std::vector<Feature> features_of(const Example& example, FeatureSet mode, const FeatureOptions& opts) {
  std::vector<Feature> out;
  if (mode != FeatureSet::Token) {
    out = suffix_ngrams(suffix_source(example.sentence, opts), opts.max_suffix);
  }
  if (mode != FeatureSet::Suffix) {
    for (auto& t : tokenize(example, opts)) out.push_back(Feature{FeatureKind::Token, std::move(t), 0});
  }
  return out;
}

FeatureVector extract(const Example& example, FeatureSet mode, Vocabulary& vocab, bool frozen,
                      const FeatureOptions& opts) {
  if (frozen) return extract(example, mode, std::as_const(vocab), opts);
  std::vector<FeatureId> ids;
  for (const auto& f : features_of(example, mode, opts)) ids.push_back(vocab.intern(f));
  return FeatureVector(std::move(ids));
}

FeatureVector extract(const Example& example, FeatureSet mode, const Vocabulary& vocab, const FeatureOptions& opts) {
  std::vector<FeatureId> ids;
  for (const auto& f : features_of(example, mode, opts)) {
    if (auto id = vocab.find(f)) ids.push_back(*id);
  }
  return FeatureVector(std::move(ids));
}

}  // namespace tamlearn
