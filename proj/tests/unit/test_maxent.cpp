#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support/helpers.hpp"
#include "tamlearn/error.hpp"
#include "tamlearn/maxent.hpp"

using namespace tamlearn;

namespace {

Example ctx(const std::string& label, std::vector<std::string> tokens) { return {label, "", std::move(tokens)}; }

double h2(double p) {
  double h = 0.0;
  if (p > 0) h -= p * std::log(p);
  if (p < 1) h -= (1 - p) * std::log(1 - p);
  return h;
}

}  // namespace

TEST_CASE("a single feature reproduces the label rates") {
  const Dataset d({ctx("A", {"f"}), ctx("A", {"f"}), ctx("B", {"f"})});
  const auto m = train_maxent(d, FeatureSet::Token);
  const auto dist = m.classify(d[0]).distribution;
  CHECK(dist[*m.labels().index_of("A")] == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
  CHECK(m.info().stop == StopReason::Converged);
}

TEST_CASE("no active feature gives the uniform distribution") {
  const Dataset d({ctx("A", {"f"}), ctx("B", {"g"}), ctx("C", {"g"})});
  const auto m = train_maxent(d, FeatureSet::Token);
  const auto dist = m.distribution(FeatureVector{});
  for (double p : dist) CHECK(p == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("separable data is fitted with bounded weights") {
  const Dataset d({ctx("A", {"f1"}), ctx("A", {"f1"}), ctx("B", {"f2"})});
  const auto m = train_maxent(d, FeatureSet::Token);
  CHECK(m.classify(d[0]).label == "A");
  CHECK(m.classify(d[2]).label == "B");
  CHECK(m.classify(d[0]).distribution[0] > 0.99);
  for (double w : m.weights()) CHECK(std::abs(w) <= 30.0 + 1e-12);
}

TEST_CASE("the fitted model is the entropy maximizer") {
  // Contexts {f1}, {f2}, {f1,f2} with two labels. Matching the two feature
  // expectations for label A leaves q = p(A|{f1,f2}) free; the remaining
  // conditionals follow from it. Maximize the conditional entropy over q.
  struct Counts {
    int a1, b1, a2, b2, a12, b12;
  };
  for (const Counts c : {Counts{3, 1, 1, 2, 2, 3}, Counts{1, 1, 1, 1, 1, 1}, Counts{4, 1, 1, 4, 2, 2},
                         Counts{2, 3, 5, 1, 1, 4}}) {
    std::vector<Example> ex;
    auto add = [&](int n, const char* label, std::vector<std::string> toks) {
      for (int i = 0; i < n; ++i) ex.push_back(ctx(label, toks));
    };
    add(c.a1, "A", {"f1"});
    add(c.b1, "B", {"f1"});
    add(c.a2, "A", {"f2"});
    add(c.b2, "B", {"f2"});
    add(c.a12, "A", {"f1", "f2"});
    add(c.b12, "B", {"f1", "f2"});
    const double n1 = c.a1 + c.b1, n2 = c.a2 + c.b2, n12 = c.a12 + c.b12;
    const double emp1 = c.a1 + c.a12, emp2 = c.a2 + c.a12;  // A-count of f1, f2
    auto conditionals = [&](double q) {
      return std::array<double, 3>{(emp1 - q * n12) / n1, (emp2 - q * n12) / n2, q};
    };
    auto entropy = [&](double q) {
      const auto p = conditionals(q);
      for (double v : p)
        if (v < 0 || v > 1) return -1e9;
      return n1 * h2(p[0]) + n2 * h2(p[1]) + n12 * h2(p[2]);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (entropy(m1) < entropy(m2)) {
        lo = m1;
      } else {
        hi = m2;
      }
    }
    const auto expect = conditionals((lo + hi) / 2);

    MaxEntOptions opt;
    opt.tol = 1e-7;
    const auto m = train_maxent(Dataset(ex), FeatureSet::Token, opt);
    const auto a = *m.labels().index_of("A");
    CHECK(m.classify(ctx("?", {"f1"})).distribution[a] == doctest::Approx(expect[0]).epsilon(1e-4));
    CHECK(m.classify(ctx("?", {"f2"})).distribution[a] == doctest::Approx(expect[1]).epsilon(1e-4));
    CHECK(m.classify(ctx("?", {"f1", "f2"})).distribution[a] == doctest::Approx(expect[2]).epsilon(1e-4));
  }
}

TEST_CASE("feature expectations match on random corpora") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto data = helpers::to_dataset(helpers::random_samples(rng, 5 + rng() % 40, 2 + rng() % 4));
    const auto mode = static_cast<FeatureSet>(1 + trial % 3);
    const auto m = train_maxent(data, mode);
    const auto L = m.labels().size();
    std::vector<double> resid(m.vocabulary().size() * L, 0.0);
    for (const auto& ex : data.examples()) {
      const auto fv = extract(ex, mode, m.vocabulary(), m.options());
      const auto dist = m.distribution(fv);
      const auto gold = *m.labels().index_of(ex.label);
      for (auto f : fv)
        for (std::size_t a = 0; a < L; ++a) resid[f * L + a] += dist[a] - (a == gold);
    }
    const double worst = *std::max_element(resid.begin(), resid.end(), [](double x, double y) {
      return std::abs(x) < std::abs(y);
    });
    CHECK(std::abs(worst) <= 1e-4 * static_cast<double>(data.size()) + 1e-12);
    CHECK(m.info().residual <= 1e-4 * static_cast<double>(data.size()));
  }
}

TEST_CASE("maxent predictions do not depend on example order") {
  std::mt19937_64 rng(32);
  auto samples = helpers::random_samples(rng, 60, 4);
  const auto queries = helpers::random_samples(rng, 40, 1);
  const auto a = train_maxent(helpers::to_dataset(samples), FeatureSet::Combined);
  std::shuffle(samples.begin(), samples.end(), rng);
  const auto b = train_maxent(helpers::to_dataset(samples), FeatureSet::Combined);
  for (const auto& q : queries) {
    const Example ex{q.label, q.sentence, q.tokens};
    const auto pa = a.classify(ex), pb = b.classify(ex);
    for (std::size_t i = 0; i < pa.distribution.size(); ++i)
      CHECK(pa.distribution[i] == doctest::Approx(pb.distribution[i]).epsilon(1e-2));
  }
}

TEST_CASE("iteration cap is reported") {
  std::mt19937_64 rng(33);
  const auto data = helpers::to_dataset(helpers::random_samples(rng, 40, 3));
  MaxEntOptions opt;
  opt.max_iters = 1;
  opt.tol = 1e-12;
  const auto m = train_maxent(data, FeatureSet::Combined, opt);
  CHECK(m.info().stop != StopReason::Converged);
  CHECK(m.info().iterations <= 1);
}

TEST_CASE("a Gaussian prior shrinks the weights") {
  const Dataset d({ctx("A", {"f1"}), ctx("A", {"f1"}), ctx("B", {"f2"})});
  MaxEntOptions opt;
  opt.prior_variance = 0.5;
  const auto m = train_maxent(d, FeatureSet::Token, opt);
  for (double w : m.weights()) CHECK(std::abs(w) < 5.0);
  CHECK(m.classify(d[0]).label == "A");
}

TEST_CASE("maxent input checks") {
  CHECK_THROWS(train_maxent(Dataset{}, FeatureSet::Token));
  MaxEntOptions bad;
  bad.tol = 0;
  CHECK_THROWS(train_maxent(Dataset({ctx("A", {"f"})}), FeatureSet::Token, bad));
}
