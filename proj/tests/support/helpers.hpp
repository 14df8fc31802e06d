#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tamlearn/corpus.hpp"
#include "tamlearn/features.hpp"

namespace helpers {

inline tamlearn::FeatureVector to_vector(const std::set<int>& s) {
  return tamlearn::FeatureVector(std::vector<tamlearn::FeatureId>(s.begin(), s.end()));
}

inline tamlearn::Dataset to_dataset(const std::vector<oracle::Sample>& samples) {
  std::vector<tamlearn::Example> ex;
  for (const auto& s : samples) ex.push_back({s.label, s.sentence, s.tokens});
  return tamlearn::Dataset(std::move(ex));
}

// Short sentences over a small alphabet so that suffixes and tokens collide
// often and ties are common. The sentence is the concatenation of its tokens.
inline std::vector<oracle::Sample> random_samples(std::mt19937_64& rng, std::size_t n, std::size_t n_labels) {
  static const std::vector<std::string> chars = {"た", "る", "い", "か", "a", "b"};
  static const std::vector<std::string> labels = {"past", "present", "can", "must", "will"};
  std::vector<oracle::Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    oracle::Sample s;
    s.label = labels[rng() % n_labels];
    const std::size_t n_tok = 1 + rng() % 3;
    for (std::size_t t = 0; t < n_tok; ++t) {
      std::string tok;
      const std::size_t len = 1 + rng() % 2;
      for (std::size_t c = 0; c < len; ++c) tok += chars[rng() % chars.size()];
      s.tokens.push_back(tok);
      s.sentence += tok;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace helpers
