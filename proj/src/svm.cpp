#include "tamlearn/svm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "tamlearn/error.hpp"

namespace tamlearn {

double kernel(const FeatureVector& x, const FeatureVector& y, int degree) {
  const double base = static_cast<double>(dot(x, y)) + 1.0;
  double out = 1.0;
  for (int i = 0; i < degree; ++i) out *= base;
  return out;
}

// ---------------------------------------------------------------------------

KernelCache::KernelCache(std::span<const FeatureVector> x, int degree, std::size_t capacity_bytes)
    : x_(x),
      degree_(degree),
      max_columns_(std::max<std::size_t>(2, capacity_bytes / (std::max<std::size_t>(x.size(), 1) * sizeof(double)))),
      diag_(x.size()),
      columns_(x.size()),
      where_(x.size()) {
  for (std::size_t i = 0; i < x_.size(); ++i) diag_[i] = kernel(x_[i], x_[i], degree_);
}

std::span<const double> KernelCache::column(std::size_t i) {
  if (where_[i]) {
    ++hits_;
    lru_.splice(lru_.begin(), lru_, *where_[i]);
    return columns_[i];
  }
  ++misses_;
  std::vector<double> col;
  if (lru_.size() >= max_columns_) {
    const auto victim = lru_.back();
    lru_.pop_back();
    where_[victim].reset();
    col = std::move(columns_[victim]);
    columns_[victim] = {};
  }
  col.resize(x_.size());
  for (std::size_t k = 0; k < x_.size(); ++k) col[k] = kernel(x_[i], x_[k], degree_);
  columns_[i] = std::move(col);
  lru_.push_front(i);
  where_[i] = lru_.begin();
  return columns_[i];
}

// ---------------------------------------------------------------------------

double extreme_bias(std::span<const double> partial, std::span<const int> y) {
  double max_neg = -std::numeric_limits<double>::infinity();
  double min_pos = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < partial.size(); ++i) {
    if (y[i] < 0) {
      max_neg = std::max(max_neg, partial[i]);
    } else {
      min_pos = std::min(min_pos, partial[i]);
    }
  }
  if (!std::isfinite(max_neg) || !std::isfinite(min_pos)) throw TrainingError("bias needs both classes");
  return -(max_neg + min_pos) / 2.0;
}

double dual_optimal_bias(std::span<const double> alpha, std::span<const double> gradient, std::span<const int> y,
                         double C) {
  double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum = 0.0;
  std::size_t n_free = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double yg = y[i] * gradient[i];
    if (alpha[i] >= C) {
      if (y[i] < 0) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (alpha[i] <= 0.0) {
      if (y[i] > 0) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      sum += yg;
      ++n_free;
    }
  }
  const double rho = n_free > 0 ? sum / static_cast<double>(n_free) : (ub + lb) / 2.0;
  return -rho;
}

std::string_view to_string(BiasRule r) { return r == BiasRule::Extremes ? "extremes" : "dual"; }

BiasRule bias_rule_from_string(std::string_view s) {
  if (s == "extremes") return BiasRule::Extremes;
  if (s == "dual") return BiasRule::DualOptimal;
  throw ConfigError("unknown svm bias rule '" + std::string(s) + "' (expected extremes or dual)");
}

namespace {

double dual_value(std::span<const double> alpha, std::span<const double> grad) {
  double v = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) v += alpha[i] * (1.0 - grad[i]);
  return v / 2.0;
}

}  // namespace

DualSolution solve_dual(std::span<const FeatureVector> x, std::span<const int> y, const SvmOptions& options) {
  const std::size_t l = x.size();
  if (y.size() != l) throw ArgumentError("svm: x and y differ in length");
  if (!(options.C > 0.0)) throw ArgumentError("svm: C must be positive");
  if (options.degree < 1) throw ArgumentError("svm: kernel degree must be positive");
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v == 1) {
      has_pos = true;
    } else if (v == -1) {
      has_neg = true;
    } else {
      throw ArgumentError("svm: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) throw TrainingError("svm: training data must contain both classes");

  const double C = options.C;
  KernelCache cache(x, options.degree, options.cache_bytes);
  DualSolution sol;
  sol.alpha.assign(l, 0.0);
  sol.gradient.assign(l, -1.0);
  auto& alpha = sol.alpha;
  auto& G = sol.gradient;

  auto at_upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  const std::size_t max_iter = std::max<std::size_t>(options.max_iter_factor * l, 1);
  std::size_t iter = 0;
  for (;; ++iter) {
    // i: maximal -y_t G_t over I_up.
    double g_max = -std::numeric_limits<double>::infinity();
    std::size_t i = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (y[t] == 1 ? !at_upper(t) : !at_lower(t)) {
        const double v = -y[t] * G[t];
        if (v >= g_max) {
          g_max = v;
          i = t;
        }
      }
    }
    // j: second-order choice over I_low.
    double g_max2 = -std::numeric_limits<double>::infinity();
    std::size_t j = l;
    if (i < l) {
      const auto Ki = cache.column(i);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < l; ++t) {
        if (y[t] == 1 ? at_lower(t) : at_upper(t)) continue;
        const double v = y[t] * G[t];
        g_max2 = std::max(g_max2, v);
        const double diff = g_max + v;
        if (diff > 0.0) {
          double quad = cache.diagonal(i) + cache.diagonal(t) - 2.0 * Ki[t];
          if (quad <= 0.0) quad = options.tau;
          const double gain = -(diff * diff) / quad;
          if (gain <= best) {
            best = gain;
            j = t;
          }
        }
      }
    }
    sol.max_violation = std::max(0.0, g_max + g_max2);
    if (i == l || j == l || g_max + g_max2 < options.eps) break;
    if (iter >= max_iter) {
      throw TrainingError("svm: no convergence after " + std::to_string(iter) + " iterations (violation " +
                              std::to_string(g_max + g_max2) + ")",
                          dual_value(alpha, G));
    }

    const auto Ki = cache.column(i);
    const auto Kj = cache.column(j);
    const double old_i = alpha[i], old_j = alpha[j];
    double quad = cache.diagonal(i) + cache.diagonal(j) - 2.0 * Ki[j];
    if (quad <= 0.0) quad = options.tau;

    if (y[i] != y[j]) {
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = sum;
        }
      }
    }

    const double di = (alpha[i] - old_i) * y[i];
    const double dj = (alpha[j] - old_j) * y[j];
    for (std::size_t k = 0; k < l; ++k) G[k] += y[k] * (Ki[k] * di + Kj[k] * dj);
  }

  sol.iterations = iter;
  sol.objective = dual_value(alpha, G);
  if (options.bias == BiasRule::Extremes) {
    std::vector<double> partial(l);
    for (std::size_t k = 0; k < l; ++k) partial[k] = y[k] * (G[k] + 1.0);
    sol.bias = extreme_bias(partial, y);
  } else {
    sol.bias = dual_optimal_bias(alpha, G, y, C);
  }
  return sol;
}

// ---------------------------------------------------------------------------

BinarySvmModel::BinarySvmModel(std::vector<FeatureVector> support, std::vector<int> y, std::vector<double> alpha,
                               double b, int degree, double C)
    : support_(std::move(support)), y_(std::move(y)), alpha_(std::move(alpha)), b_(b), degree_(degree), C_(C) {
  if (support_.size() != y_.size() || y_.size() != alpha_.size()) throw ModelError("svm: inconsistent model sizes");
  if (!std::isfinite(b_)) throw ModelError("svm: non-finite bias");
}

Decision BinarySvmModel::decide(const FeatureVector& x) const {
  double raw = b_;
  for (std::size_t i = 0; i < support_.size(); ++i) raw += alpha_[i] * y_[i] * kernel(support_[i], x, degree_);
  return Decision{raw, raw >= 0.0 ? 1 : -1};
}

BinarySvmModel train_binary_svm(std::span<const FeatureVector> x, std::span<const int> y, const SvmOptions& options) {
  auto sol = solve_dual(x, y, options);
  std::vector<FeatureVector> sv;
  std::vector<int> sy;
  std::vector<double> sa;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sol.alpha[i] > 0.0) {
      sv.push_back(x[i]);
      sy.push_back(y[i]);
      sa.push_back(sol.alpha[i]);
    }
  }
  BinarySvmModel model(std::move(sv), std::move(sy), std::move(sa), sol.bias, options.degree, options.C);
  model.dual_objective = sol.objective;
  model.max_violation = sol.max_violation;
  model.iterations = sol.iterations;
  return model;
}

// ---------------------------------------------------------------------------

PairwiseModel::PairwiseModel(Vocabulary vocab, LabelSet labels, std::vector<Pair> pairs, FeatureSet mode,
                             FeatureOptions opts, SvmOptions svm)
    : vocab_(std::move(vocab)),
      labels_(std::move(labels)),
      pairs_(std::move(pairs)),
      mode_(mode),
      opts_(std::move(opts)),
      svm_(svm) {
  const auto n = labels_.size();
  if (n == 0) throw ModelError("pairwise svm: empty label set");
  if (pairs_.size() != n * (n - 1) / 2) throw ModelError("pairwise svm: wrong number of classifiers");
  for (const auto& p : pairs_) {
    if (p.positive >= n || p.negative >= n || p.positive == p.negative) throw ModelError("pairwise svm: bad pair");
    if (!p.model && p.default_winner != p.positive && p.default_winner != p.negative) {
      throw ModelError("pairwise svm: degenerate pair winner outside the pair");
    }
  }
}

PairwiseModel::Prediction PairwiseModel::classify(const FeatureVector& fv) const {
  Prediction out;
  out.votes.assign(labels_.size(), 0);
  for (const auto& p : pairs_) {
    std::size_t winner = p.default_winner;
    if (p.model) winner = p.model->decide(fv).sign > 0 ? p.positive : p.negative;
    ++out.votes[winner];
  }
  out.label = labels_.labels()[labels_.argmax(std::span<const std::size_t>(out.votes))];
  return out;
}

PairwiseModel::Prediction PairwiseModel::classify(const Example& example) const {
  return classify(extract(example, mode_, vocab_, opts_));
}

PairwiseModel train_pairwise(const Dataset& train, FeatureSet mode, const SvmOptions& svm, const FeatureOptions& opts,
                             const std::vector<std::string>& label_universe, unsigned threads) {
  std::map<std::string, std::size_t> counts;
  for (const auto& l : label_universe) counts.emplace(l, 0);
  for (const auto& e : train.examples()) ++counts[e.label];
  LabelSet labels(std::move(counts));
  if (labels.empty()) throw TrainingError("pairwise svm: empty training set");

  Vocabulary vocab;
  std::vector<FeatureVector> x;
  std::vector<std::vector<std::size_t>> by_label(labels.size());
  x.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    x.push_back(extract(train[i], mode, vocab, false, opts));
    by_label[*labels.index_of(train[i].label)].push_back(i);
  }

  std::vector<PairwiseModel::Pair> pairs;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      PairwiseModel::Pair p;
      p.positive = a;
      p.negative = b;
      if (by_label[a].empty() || by_label[b].empty()) {
        if (!by_label[a].empty()) {
          p.default_winner = a;
        } else if (!by_label[b].empty()) {
          p.default_winner = b;
        } else {
          p.default_winner = labels.prefer(a, b) ? a : b;
        }
      }
      pairs.push_back(std::move(p));
    }
  }

  auto fit = [&](PairwiseModel::Pair& p) {
    if (by_label[p.positive].empty() || by_label[p.negative].empty()) return;
    std::vector<std::size_t> idx;
    std::merge(by_label[p.positive].begin(), by_label[p.positive].end(), by_label[p.negative].begin(),
               by_label[p.negative].end(), std::back_inserter(idx));
    std::vector<FeatureVector> px;
    std::vector<int> py;
    px.reserve(idx.size());
    py.reserve(idx.size());
    const auto& pos_label = labels.labels()[p.positive];
    for (auto i : idx) {
      px.push_back(x[i]);
      py.push_back(train[i].label == pos_label ? 1 : -1);
    }
    p.model = train_binary_svm(px, py, svm);
  };

  threads = std::max(1u, threads);
  if (threads == 1 || pairs.size() < 2) {
    for (auto& p : pairs) fit(p);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, pairs.size()); ++t) {
      workers.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < pairs.size();) {
          try {
            fit(pairs[k]);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    workers.clear();
    if (error) std::rethrow_exception(error);
  }

  return PairwiseModel(std::move(vocab), std::move(labels), std::move(pairs), mode, opts, svm);
}

}  // namespace tamlearn
