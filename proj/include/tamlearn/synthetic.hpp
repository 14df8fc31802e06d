#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tamlearn/corpus.hpp"

namespace tamlearn::synthetic {

/// Pre-tokenized Japanese-like sentences "subject place object verb". The verb
/// ending fixes the tense label (past / present). With probability
/// `adverb_rate` a sentence-initial adverb overrides the label (もう -> perfect,
/// 明日 -> will); the adverb always sits more than 10 characters before the end
/// of the sentence, so suffix features cannot see it.
struct AdverbCorpusOptions {
  std::size_t size = 2000;
  double adverb_rate = 0.2;
  std::uint64_t seed = 0;
};

Dataset adverb_corpus(const AdverbCorpusOptions& options);

/// Same sentence shapes without adverbs. When `swap_tense` is set the
/// suffix->label mapping is inverted (た/だ endings labelled present and
/// dictionary forms labelled past), giving a domain that conflicts with the
/// default one.
struct DomainOptions {
  std::size_t size = 600;
  bool swap_tense = false;
  std::uint64_t seed = 0;
};

Dataset domain_corpus(const DomainOptions& options);

/// Category rates of the dictionary-example corpus (present .42, past .36, ...).
/// "must" stands in for the remaining categories.
const std::vector<std::pair<std::string, double>>& dictionary_rates();

/// Sentences whose endings are consistent with their category, drawn so that
/// each label's count is round(rate * size) (remainder to "present").
Dataset dictionary_corpus(std::size_t size, std::uint64_t seed);

}  // namespace tamlearn::synthetic
