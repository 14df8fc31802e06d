#include "tamlearn/synthetic.hpp"

#include <cmath>

#include "tamlearn/error.hpp"
#include "tamlearn/random.hpp"

namespace tamlearn::synthetic {

namespace {

struct Verb {
  const char* present;
  const char* past;
  const char* te;
  const char* imperative;
  const char* potential;
};

constexpr Verb kVerbs[] = {
    {"読む", "読んだ", "読んで", "読め", "読める"}, {"書く", "書いた", "書いて", "書け", "書ける"},
    {"作る", "作った", "作って", "作れ", "作れる"}, {"見る", "見た", "見て", "見ろ", "見られる"},
    {"聞く", "聞いた", "聞いて", "聞け", "聞ける"}, {"撮る", "撮った", "撮って", "撮れ", "撮れる"},
    {"送る", "送った", "送って", "送れ", "送れる"}, {"買う", "買った", "買って", "買え", "買える"},
    {"洗う", "洗った", "洗って", "洗え", "洗える"}, {"選ぶ", "選んだ", "選んで", "選べ", "選べる"},
};

// With its particle every phrase spans at least three characters.
constexpr const char* kSubjects[] = {"子供たち", "先生", "私たち", "彼女", "学生", "父親", "母親", "友達"};
constexpr const char* kPlaces[] = {"図書館", "公園", "学校", "駅前", "会社", "部屋", "教室"};
constexpr const char* kObjects[] = {"手紙", "宿題", "料理", "映画", "写真", "新聞", "雑誌", "荷物"};

template <class T, std::size_t N>
const T& pick(const T (&arr)[N], Rng& rng) {
  return arr[uniform_below(rng, N)];
}

// Subject, place and object phrases as tokens.
std::vector<std::string> frame(Rng& rng) {
  return {pick(kSubjects, rng), "は", pick(kPlaces, rng), "で", pick(kObjects, rng), "を"};
}

Example make(std::string label, std::vector<std::string> tokens) {
  std::string sentence;
  for (const auto& t : tokens) sentence += t;
  return Example{std::move(label), std::move(sentence), std::move(tokens)};
}

}  // namespace

Dataset adverb_corpus(const AdverbCorpusOptions& options) {
  Rng rng(options.seed);
  std::vector<Example> out;
  out.reserve(options.size);
  for (std::size_t i = 0; i < options.size; ++i) {
    const auto& verb = pick(kVerbs, rng);
    const bool past = uniform_below(rng, 2) == 1;
    auto tokens = frame(rng);
    tokens.emplace_back(past ? verb.past : verb.present);
    std::string label = past ? "past" : "present";
    if (uniform_unit(rng) < options.adverb_rate) {
      const bool already = uniform_below(rng, 2) == 1;
      tokens.insert(tokens.begin(), already ? "もう" : "明日");
      label = already ? "perfect" : "will";
    }
    out.push_back(make(std::move(label), std::move(tokens)));
  }
  return Dataset(std::move(out));
}

Dataset domain_corpus(const DomainOptions& options) {
  Rng rng(options.seed);
  std::vector<Example> out;
  out.reserve(options.size);
  for (std::size_t i = 0; i < options.size; ++i) {
    const auto& verb = pick(kVerbs, rng);
    const bool past_form = uniform_below(rng, 2) == 1;
    auto tokens = frame(rng);
    tokens.emplace_back(past_form ? verb.past : verb.present);
    const bool past_label = past_form != options.swap_tense;
    out.push_back(make(past_label ? "past" : "present", std::move(tokens)));
  }
  return Dataset(std::move(out));
}

const std::vector<std::pair<std::string, double>>& dictionary_rates() {
  static const std::vector<std::pair<std::string, double>> rates = {
      {"present", 0.42}, {"past", 0.36}, {"imperative", 0.05}, {"perfect", 0.04},
      {"will", 0.03},    {"progressive", 0.03}, {"can", 0.02}, {"must", 0.05},
  };
  return rates;
}

Dataset dictionary_corpus(std::size_t size, std::uint64_t seed) {
  if (size == 0) throw ArgumentError("dictionary_corpus: size must be positive");
  std::vector<std::string> labels;
  for (const auto& [label, rate] : dictionary_rates()) {
    const auto n = static_cast<std::size_t>(std::llround(rate * static_cast<double>(size)));
    for (std::size_t i = 0; i < n && labels.size() < size; ++i) labels.push_back(label);
  }
  while (labels.size() < size) labels.emplace_back("present");

  Rng rng(seed);
  shuffle(labels, rng);
  std::vector<Example> out;
  out.reserve(size);
  for (auto& label : labels) {
    const auto& v = pick(kVerbs, rng);
    auto tokens = frame(rng);
    if (label == "present") {
      tokens.emplace_back(v.present);
    } else if (label == "past") {
      tokens.emplace_back(v.past);
    } else if (label == "imperative") {
      tokens.emplace_back(v.imperative);
    } else if (label == "perfect") {
      tokens.insert(tokens.end(), {v.te, "しまった"});
    } else if (label == "will") {
      tokens.insert(tokens.end(), {v.present, "だろう"});
    } else if (label == "progressive") {
      tokens.insert(tokens.end(), {v.te, "いる"});
    } else if (label == "can") {
      tokens.emplace_back(v.potential);
    } else {
      tokens.insert(tokens.end(), {v.present, "べきだ"});
    }
    out.push_back(make(std::move(label), std::move(tokens)));
  }
  return Dataset(std::move(out));
}

}  // namespace tamlearn::synthetic
