#include <cmath>
#include <map>
#include <set>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support/helpers.hpp"
#include "tamlearn/error.hpp"
#include "tamlearn/eval.hpp"
#include "tamlearn/synthetic.hpp"
#include "tamlearn/utf8.hpp"

using namespace tamlearn;

namespace {

// C(n, k) p^k (1-p)^(n-k) summed by Pascal's triangle recurrences.
double upper_tail_oracle(std::size_t n, double p, std::size_t k) {
  std::vector<double> row = {1.0};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> next(row.size() + 1, 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += row[j] * (1 - p);
      next[j + 1] += row[j] * p;
    }
    row = std::move(next);
  }
  double s = 0.0;
  for (std::size_t j = k; j <= n; ++j) s += row[j];
  return s;
}

LearnerSpec spec(Method m) {
  LearnerSpec s;
  s.method = m;
  return s;
}

}  // namespace

TEST_CASE("baseline: past iff the sentence ends in た") {
  CHECK(baseline_classify("食べた") == "past");
  CHECK(baseline_classify("読んだ") == "present");
  CHECK(baseline_classify("食べる") == "present");
  CHECK(baseline_classify("") == "present");
  TrainedModel keep{spec(Method::Baseline), FeatureSet::Suffix, BaselineModel{}};
  auto strip = keep;
  strip.spec.features.strip_terminal_punct = true;
  CHECK(keep.predict({"past", "食べた。"}) == "present");
  CHECK(strip.predict({"past", "食べた。"}) == "past");
}

TEST_CASE("baseline precision on the category-rate corpus is fixed by construction") {
  const auto data = synthetic::dictionary_corpus(1000, 5);
  std::size_t expect = 0;
  for (const auto& e : data.examples()) {
    const bool ends_ta = e.sentence.size() >= 3 && e.sentence.substr(e.sentence.size() - 3) == "た";
    expect += (e.label == "past" && ends_ta) || (e.label == "present" && !ends_ta);
  }
  const auto r = evaluate(TrainedModel{spec(Method::Baseline), FeatureSet::Suffix, BaselineModel{}}, data);
  CHECK(r.correct() == expect);
  CHECK(r.total() == 1000);
  // Present sentences never end in た, and most past ones do.
  CHECK(r.precision() > 0.42);
  CHECK(r.precision() < 0.78 + 1e-12);
}

TEST_CASE("category distribution") {
  const auto data = synthetic::dictionary_corpus(1000, 1);
  const auto dist = category_distribution(data);
  CHECK(dist.front().first == "present");
  CHECK(dist.front().second == doctest::Approx(0.42));
  double sum = 0.0;
  for (const auto& [label, rate] : dist) sum += rate;
  CHECK(std::abs(sum - 1.0) < 1e-12);
  for (std::size_t i = 1; i < dist.size(); ++i) CHECK(dist[i - 1].second >= dist[i].second);

  const auto two = category_distribution(Dataset({{"b", "x"}, {"a", "y"}, {"a", "z"}, {"b", "w"}}));
  CHECK(two[0] == std::pair<std::string, double>{"a", 0.5});
  CHECK(two[1] == std::pair<std::string, double>{"b", 0.5});
  CHECK_THROWS_AS(category_distribution(Dataset{}), ArgumentError);
}

// ---------------------------------------------------------------------------

TEST_CASE("sign test values") {
  const auto big = sign_test(648, 427, 0.01);
  CHECK(big.significant);
  CHECK_FALSE(big.exact);
  CHECK(big.p_value < 1e-10);

  const auto even = sign_test(5, 5, 0.05);
  CHECK(even.p_value == 1.0);
  CHECK_FALSE(even.significant);

  const auto nine = sign_test(9, 1, 0.05);
  CHECK(nine.exact);
  CHECK(nine.p_value == doctest::Approx(0.021484375).epsilon(1e-12));
  CHECK(nine.significant);

  CHECK_THROWS(sign_test(0, 0, 0.05));
  CHECK(sign_test(1, 0, 0.05).p_value == 1.0);
}

TEST_CASE("sign test is symmetric and bounded") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t a = rng() % 1500, b = rng() % 1500;
    const auto x = sign_test(a, b, 0.01), y = sign_test(b, a, 0.01);
    CHECK(x.p_value == y.p_value);
    CHECK(x.p_value >= 0.0);
    CHECK(x.p_value <= 1.0);
  }
}

TEST_CASE("exact and approximate sign tests agree at the switch-over") {
  double worst = 0.0;
  for (std::size_t plus = 0; plus <= 1000; plus += 5) {
    worst = std::max(worst, std::abs(sign_test_exact_p(plus, 1000 - plus) - sign_test_normal_p(plus, 1000 - plus)));
  }
  CHECK(worst < 0.005);
  CHECK(sign_test(500, 500, 0.01).exact);
  CHECK_FALSE(sign_test(501, 500, 0.01).exact);
}

TEST_CASE("binomial tails match direct summation") {
  for (std::size_t n : {1, 7, 20, 60}) {
    for (double p : {0.01, 0.3, 0.5, 0.9}) {
      for (std::size_t k = 0; k <= n; k += 1 + n / 7) {
        CHECK(binomial_upper_tail(n, p, k) == doctest::Approx(upper_tail_oracle(n, p, k)).epsilon(1e-9));
      }
    }
  }
  CHECK(binomial_upper_tail(10, 0.5, 0) == 1.0);
  CHECK(binomial_upper_tail(10, 0.0, 1) == 0.0);
  CHECK(binomial_upper_tail(10, 1.0, 10) == 1.0);
}

TEST_CASE("effective features") {
  // "もう" is in every flip example but in 1% of all examples.
  std::vector<Example> all;
  for (int i = 0; i < 5000; ++i) {
    const bool adverb = i < 50;
    std::vector<std::string> toks = {"私", "は", i % 2 ? "読んだ" : "読む"};
    if (adverb) toks.insert(toks.begin(), "もう");
    all.push_back({"x", "", toks});
  }
  const std::vector<Example> flip(all.begin(), all.begin() + 50);
  const auto found = effective_features(flip, all, FeatureSet::Token);
  REQUIRE_FALSE(found.empty());
  CHECK(found.front().feature.text == "もう");
  CHECK(found.front().flip_count == 50);
  CHECK(found.front().all_count == 50);
  CHECK(found.front().p_value < 1e-10);
  for (const auto& f : found) CHECK(f.feature.text != "私");  // same rate everywhere

  CHECK(effective_features({}, all, FeatureSet::Token).empty());
}

// ---------------------------------------------------------------------------

TEST_CASE("closed test of 1-nn on duplicate-free data is perfect") {
  const auto data = synthetic::dictionary_corpus(300, 2);
  std::set<std::string> seen;
  std::vector<Example> unique;
  for (const auto& e : data.examples())
    if (seen.insert(e.sentence).second) unique.push_back(e);
  LearnerSpec knn = spec(Method::Knn);
  knn.k = 1;
  // Distinct sentences longer than ten characters can still share their last
  // ten, so keep only examples whose final ten characters are unique.
  std::map<std::string, int> tails;
  for (const auto& e : unique) ++tails[std::string(utf8::suffix(e.sentence, 10))];
  std::vector<Example> distinct;
  for (const auto& e : unique)
    if (tails[std::string(utf8::suffix(e.sentence, 10))] == 1) distinct.push_back(e);
  REQUIRE(distinct.size() > 20);
  CHECK(closed_test(knn, Dataset(distinct), FeatureSet::Suffix).precision() == 1.0);
}

TEST_CASE("a constant label is always predicted") {
  std::mt19937_64 rng(52);
  auto samples = helpers::random_samples(rng, 40, 1);
  const auto data = helpers::to_dataset(samples);
  const auto plan = split_folds(data, 5, 0);
  for (Method m : {Method::DecisionList, Method::MaxEnt, Method::Svm}) {
    CHECK(cross_validate(spec(m), data, plan, FeatureSet::Combined).precision() == 1.0);
  }
  CHECK(cross_validate(spec(Method::Knn), data, plan, FeatureSet::Suffix).precision() == 1.0);
}

TEST_CASE("cross-validation reports cover every example once") {
  std::mt19937_64 rng(53);
  const auto data = helpers::to_dataset(helpers::random_samples(rng, 57, 3));
  const auto plan = split_folds(data, 10, 4);
  const auto r = cross_validate(spec(Method::DecisionList), data, plan, FeatureSet::Combined, 3);
  CHECK(r.total() == data.size());
  CHECK(r.folds.size() == 10);
  std::size_t sum = 0;
  for (const auto& f : r.folds) sum += f.total;
  CHECK(sum == data.size());
  for (std::size_t i = 0; i < r.predictions.size(); ++i) {
    CHECK(r.predictions[i].index == i);
    CHECK(r.predictions[i].gold == data[i].label);
  }
  const auto serial = cross_validate(spec(Method::DecisionList), data, plan, FeatureSet::Combined, 1);
  for (std::size_t i = 0; i < r.predictions.size(); ++i)
    CHECK(serial.predictions[i].predicted == r.predictions[i].predicted);
}

TEST_CASE("leave-one-out does not depend on the fold seed") {
  std::mt19937_64 rng(54);
  const auto data = helpers::to_dataset(helpers::random_samples(rng, 25, 3));
  const auto a = cross_validate(spec(Method::MaxEnt), data, split_folds(data, 25, 1), FeatureSet::Combined);
  const auto b = cross_validate(spec(Method::MaxEnt), data, split_folds(data, 25, 2), FeatureSet::Combined);
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(a.predictions[i].predicted == b.predictions[i].predicted);
}

TEST_CASE("knn is rejected outside feature set 2") {
  const Dataset d({{"a", "x"}, {"b", "y"}});
  CHECK_THROWS_AS(cross_validate(spec(Method::Knn), d, split_folds(d, 2, 0), FeatureSet::Combined), ConfigError);
  CHECK_THROWS_AS(closed_test(spec(Method::Knn), d, FeatureSet::Token), ConfigError);
}

// ---------------------------------------------------------------------------

TEST_CASE("cross-domain: disjoint data is plain train then test") {
  synthetic::DomainOptions a, b;
  a.seed = 1;
  a.size = 200;
  b.seed = 2;
  b.size = 100;
  b.swap_tense = true;
  const auto da = synthetic::domain_corpus(a), db = synthetic::domain_corpus(b);
  std::set<std::string> train_sentences;
  for (const auto& e : da.examples()) train_sentences.insert(e.sentence);
  std::vector<Example> fresh;
  for (const auto& e : db.examples())
    if (!train_sentences.count(e.sentence)) fresh.push_back(e);
  const Dataset test(fresh);
  const auto r = cross_domain_eval(da, test, spec(Method::DecisionList), FeatureSet::Combined);
  const auto model = train(spec(Method::DecisionList), da, FeatureSet::Combined);
  CHECK(r.folds.size() == 1);
  CHECK(r.folds[0].fold == -1);
  for (std::size_t i = 0; i < test.size(); ++i) CHECK(r.predictions[i].predicted == model.predict(test[i]));
  const double same = cross_validate(spec(Method::Svm), da, split_folds(da, 10, 0), FeatureSet::Combined).precision();
  CHECK(cross_domain_eval(da, test, spec(Method::Svm), FeatureSet::Combined).precision() < same);
}

TEST_CASE("cross-domain: a test set inside the training set is pure cross-validation") {
  std::mt19937_64 rng(55);
  const auto samples = helpers::random_samples(rng, 60, 3);
  std::vector<oracle::Sample> unique;
  std::set<std::pair<std::string, std::vector<std::string>>> seen;
  for (const auto& s : samples)
    if (seen.insert({s.sentence, s.tokens}).second) unique.push_back(s);
  const auto train = helpers::to_dataset(unique);
  const auto r = cross_domain_eval(train, train, spec(Method::DecisionList), FeatureSet::Combined, 5, 3);
  const auto cv = cross_validate(spec(Method::DecisionList), train, split_folds(train, 5, 3), FeatureSet::Combined);
  for (const auto& f : r.folds) CHECK(f.fold >= 0);
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(r.predictions[i].predicted == cv.predictions[i].predicted);
}

TEST_CASE("paired comparison counts disagreements") {
  PrecisionReport a, b;
  a.predictions = {{0, "x", "x"}, {1, "x", "y"}, {2, "x", "x"}, {3, "x", "y"}};
  b.predictions = {{0, "x", "y"}, {1, "x", "x"}, {2, "x", "x"}, {3, "x", "x"}};
  const auto c = compare(a, b);
  CHECK(c.a_only == 1);
  CHECK(c.b_only == 2);
  CHECK(c.b_only_indices == std::vector<std::size_t>{1, 3});
  CHECK(c.a_only_indices == std::vector<std::size_t>{0});
}
