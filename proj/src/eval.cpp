#include "tamlearn/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

#include "tamlearn/error.hpp"

namespace tamlearn {

std::size_t PrecisionReport::correct() const {
  return static_cast<std::size_t>(
      std::count_if(predictions.begin(), predictions.end(), [](const auto& p) { return p.correct(); }));
}

std::size_t PrecisionReport::total() const {
  return predictions.size();
}

double PrecisionReport::precision() const {
  const auto t = total();
  return t == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(t);
}

namespace {

std::vector<std::string> universe(const Dataset& d) { return d.label_inventory().labels(); }

// Runs job(k) for k in [0, n) on up to `threads` workers.
template <class Job>
void parallel_for(std::size_t n, unsigned threads, Job job) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) {
    for (std::size_t k = 0; k < n; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex m;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t) {
      workers.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < n;) {
          try {
            job(k);
          } catch (...) {
            std::lock_guard lock(m);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string example_key(const Example& e) {
  std::string k = e.label;
  k += '\t';
  k += e.sentence;
  if (e.tokens) {
    k += '\t';
    for (const auto& t : *e.tokens) {
      k += t;
      k += ' ';
    }
  }
  return k;
}

}  // namespace

PrecisionReport cross_validate(const LearnerSpec& spec, const Dataset& dataset, const FoldPlan& plan, FeatureSet mode,
                               unsigned threads) {
  validate(spec, mode);
  if (plan.assignment.size() != dataset.size()) throw ArgumentError("fold plan does not match dataset size");

  PrecisionReport report;
  report.method = spec.row_name();
  report.mode = mode;
  report.n_folds = plan.n_folds;
  report.seed = plan.seed;
  report.folds.resize(plan.n_folds);
  report.predictions.resize(dataset.size());
  const auto labels = universe(dataset);

  // Each fold writes only its own tally and its own examples' records.
  parallel_for(plan.n_folds, threads, [&](std::size_t k) {
    const auto test_idx = plan.fold(k);
    const auto train_idx = plan.complement(k);
    FoldTally tally{static_cast<int>(k), 0, test_idx.size()};
    if (!test_idx.empty()) {
      const auto model = train(spec, dataset.subset(train_idx), mode, labels);
      for (auto i : test_idx) {
        PredictionRecord r{i, dataset[i].label, model.predict(dataset[i])};
        tally.correct += r.correct();
        report.predictions[i] = std::move(r);
      }
    }
    report.folds[k] = tally;
  });
  return report;
}

PrecisionReport closed_test(const LearnerSpec& spec, const Dataset& dataset, FeatureSet mode, unsigned threads) {
  const auto model = train(spec, dataset, mode, universe(dataset), threads);
  auto report = evaluate(model, dataset);
  report.closed = true;
  return report;
}

PrecisionReport evaluate(const TrainedModel& model, const Dataset& test) {
  PrecisionReport report;
  report.method = model.spec.row_name();
  report.mode = model.mode;
  FoldTally tally{-1, 0, test.size()};
  for (std::size_t i = 0; i < test.size(); ++i) {
    PredictionRecord r{i, test[i].label, model.predict(test[i])};
    tally.correct += r.correct();
    report.predictions.push_back(std::move(r));
  }
  report.folds.push_back(tally);
  return report;
}

PrecisionReport cross_domain_eval(const Dataset& train, const Dataset& test, const LearnerSpec& spec, FeatureSet mode,
                                  std::size_t n_folds, std::uint64_t seed, unsigned threads) {
  validate(spec, mode);
  if (train.empty() || test.empty()) throw ArgumentError("cross-domain evaluation needs non-empty datasets");

  std::map<std::string, std::size_t> train_index;
  for (std::size_t i = 0; i < train.size(); ++i) train_index.try_emplace(example_key(train[i]), i);

  std::vector<std::size_t> disjoint;
  std::vector<std::pair<std::size_t, std::size_t>> overlap;  // (test index, train index)
  for (std::size_t i = 0; i < test.size(); ++i) {
    auto it = train_index.find(example_key(test[i]));
    if (it == train_index.end()) {
      disjoint.push_back(i);
    } else {
      overlap.emplace_back(i, it->second);
    }
  }

  std::vector<std::string> labels = universe(train);
  for (const auto& l : test.label_inventory().labels()) {
    if (!train.label_inventory().index_of(l)) labels.push_back(l);
  }

  PrecisionReport report;
  report.method = spec.row_name();
  report.mode = mode;
  report.seed = seed;
  report.predictions.resize(test.size());

  if (!disjoint.empty()) {
    const auto model = tamlearn::train(spec, train, mode, labels, threads);
    FoldTally tally{-1, 0, disjoint.size()};
    for (auto i : disjoint) {
      PredictionRecord r{i, test[i].label, model.predict(test[i])};
      tally.correct += r.correct();
      report.predictions[i] = std::move(r);
    }
    report.folds.push_back(tally);
  }

  if (!overlap.empty()) {
    const auto folds = std::min(n_folds, train.size());
    if (folds < 2) throw ArgumentError("cross-domain overlap needs at least two training examples");
    const auto plan = split_folds(train, folds, seed);
    report.n_folds = folds;
    std::vector<FoldTally> tallies(folds);
    parallel_for(folds, threads, [&](std::size_t k) {
      tallies[k].fold = static_cast<int>(k);
      std::vector<std::size_t> mine;
      for (const auto& [ti, tr] : overlap) {
        if (plan.assignment[tr] == k) mine.push_back(ti);
      }
      if (mine.empty()) return;
      const auto model = tamlearn::train(spec, train.subset(plan.complement(k)), mode, labels);
      for (auto i : mine) {
        PredictionRecord r{i, test[i].label, model.predict(test[i])};
        tallies[k].correct += r.correct();
        ++tallies[k].total;
        report.predictions[i] = std::move(r);
      }
    });
    for (auto& t : tallies) {
      if (t.total > 0) report.folds.push_back(t);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

double binomial_upper_tail(std::size_t n, double p, std::size_t k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(k - 1)));
}

double sign_test_exact_p(std::size_t n_plus, std::size_t n_minus) {
  const auto n = n_plus + n_minus;
  const auto k = std::max(n_plus, n_minus);
  if (n_plus == n_minus) return 1.0;
  return std::min(1.0, 2.0 * binomial_upper_tail(n, 0.5, k));
}

double sign_test_normal_p(std::size_t n_plus, std::size_t n_minus) {
  const double n = static_cast<double>(n_plus + n_minus);
  const double diff = std::abs(static_cast<double>(n_plus) - static_cast<double>(n_minus));
  const double z = (diff - 1.0) / std::sqrt(n);
  if (z <= 0.0) return 1.0;
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

SignTestResult sign_test(std::size_t n_plus, std::size_t n_minus, double level) {
  if (n_plus + n_minus == 0) throw ArgumentError("sign test needs at least one untied pair");
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("significance level must be in (0, 1)");
  SignTestResult r;
  r.n_plus = n_plus;
  r.n_minus = n_minus;
  r.level = level;
  r.exact = n_plus + n_minus <= kExactSignTestLimit;
  r.p_value = r.exact ? sign_test_exact_p(n_plus, n_minus) : sign_test_normal_p(n_plus, n_minus);
  r.significant = r.p_value < level;
  return r;
}

std::vector<EffectiveFeature> effective_features(std::span<const Example> flip_set, std::span<const Example> all_set,
                                                 FeatureSet mode, double level, const FeatureOptions& opts) {
  if (flip_set.empty() || all_set.empty()) return {};

  auto count_into = [&](std::span<const Example> set, Vocabulary& vocab, std::vector<std::size_t>& counts,
                        bool frozen) {
    for (const auto& e : set) {
      const auto fv = extract(e, mode, vocab, frozen, opts);
      counts.resize(vocab.size(), 0);
      for (auto id : fv) ++counts[id];
    }
  };
  Vocabulary vocab;
  std::vector<std::size_t> flip_counts, all_counts;
  count_into(flip_set, vocab, flip_counts, false);
  all_counts.assign(vocab.size(), 0);
  count_into(all_set, vocab, all_counts, true);

  std::vector<EffectiveFeature> out;
  for (FeatureId f = 0; f < vocab.size(); ++f) {
    const double rate = static_cast<double>(all_counts[f]) / static_cast<double>(all_set.size());
    const double p = binomial_upper_tail(flip_set.size(), rate, flip_counts[f]);
    if (p < level) out.push_back(EffectiveFeature{vocab.feature(f), flip_counts[f], all_counts[f], p});
  }
  std::sort(out.begin(), out.end(), [](const EffectiveFeature& a, const EffectiveFeature& b) {
    if (a.flip_count != b.flip_count) return a.flip_count > b.flip_count;
    if (a.p_value != b.p_value) return a.p_value < b.p_value;
    return a.feature < b.feature;
  });
  return out;
}

std::vector<std::pair<std::string, double>> category_distribution(const Dataset& dataset) {
  if (dataset.empty()) throw ArgumentError("category distribution of an empty dataset");
  const auto& inv = dataset.label_inventory();
  std::vector<std::pair<std::string, double>> out;
  std::vector<std::size_t> order(inv.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return inv.prefer(a, b); });
  for (auto i : order) {
    out.emplace_back(inv.labels()[i], static_cast<double>(inv.counts()[i]) / static_cast<double>(dataset.size()));
  }
  return out;
}

PairedComparison compare(const PrecisionReport& a, const PrecisionReport& b) {
  if (a.predictions.size() != b.predictions.size()) throw ArgumentError("reports cover different examples");
  PairedComparison out;
  for (std::size_t i = 0; i < a.predictions.size(); ++i) {
    const auto& pa = a.predictions[i];
    const auto& pb = b.predictions[i];
    if (pa.index != pb.index) throw ArgumentError("reports are not aligned");
    if (pa.correct() && !pb.correct()) {
      ++out.a_only;
      out.a_only_indices.push_back(pa.index);
    } else if (pb.correct() && !pa.correct()) {
      ++out.b_only;
      out.b_only_indices.push_back(pb.index);
    }
  }
  return out;
}

}  // namespace tamlearn
