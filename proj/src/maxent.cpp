#include "tamlearn/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "tamlearn/error.hpp"

namespace tamlearn {

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::IterationCap: return "iteration_cap";
    case StopReason::Stalled: return "stalled";
  }
  return "?";
}

namespace {

// Softmax of per-label scores in place.
void normalize(std::vector<double>& scores) {
  const double mx = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (auto& s : scores) {
    s = std::exp(s - mx);
    z += s;
  }
  for (auto& s : scores) s /= z;
}

void scores_into(const std::vector<double>& w, std::size_t n_labels, const FeatureVector& fv,
                 std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (auto f : fv) {
    const double* row = w.data() + static_cast<std::size_t>(f) * n_labels;
    for (std::size_t a = 0; a < n_labels; ++a) out[a] += row[a];
  }
}

class Objective {
 public:
  Objective(const std::vector<FeatureVector>& contexts, const std::vector<std::size_t>& labels, std::size_t n_features,
            std::size_t n_labels, std::optional<double> prior_variance)
      : contexts_(contexts),
        labels_(labels),
        n_labels_(n_labels),
        prior_(prior_variance),
        empirical_(n_features * n_labels, 0.0) {
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
      for (auto f : contexts_[i]) empirical_[f * n_labels_ + labels_[i]] += 1.0;
    }
  }

  // Negative conditional log-likelihood (plus prior). Writes the gradient and
  // the constraint residual max |expected - empirical|.
  double evaluate(const std::vector<double>& w, std::vector<double>& grad, double& residual) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::vector<double> p(n_labels_);
    double nll = 0.0;
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
      scores_into(w, n_labels_, contexts_[i], p);
      const double mx = *std::max_element(p.begin(), p.end());
      double z = 0.0;
      for (double s : p) z += std::exp(s - mx);
      nll += mx + std::log(z) - p[labels_[i]];
      normalize(p);
      for (auto f : contexts_[i]) {
        double* row = grad.data() + static_cast<std::size_t>(f) * n_labels_;
        for (std::size_t a = 0; a < n_labels_; ++a) row[a] += p[a];
      }
    }
    residual = 0.0;
    for (std::size_t j = 0; j < grad.size(); ++j) {
      grad[j] -= empirical_[j];
      residual = std::max(residual, std::abs(grad[j]));
    }
    if (prior_) {
      for (std::size_t j = 0; j < grad.size(); ++j) {
        nll += w[j] * w[j] / (2.0 * *prior_);
        grad[j] += w[j] / *prior_;
      }
    }
    return nll;
  }

 private:
  const std::vector<FeatureVector>& contexts_;
  const std::vector<std::size_t>& labels_;
  std::size_t n_labels_;
  std::optional<double> prior_;
  std::vector<double> empirical_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

MaxEntModel::MaxEntModel(Vocabulary vocab, LabelSet labels, std::vector<double> weights, FeatureSet mode,
                         FeatureOptions opts, MaxEntTrainingInfo info)
    : vocab_(std::move(vocab)),
      labels_(std::move(labels)),
      weights_(std::move(weights)),
      mode_(mode),
      opts_(std::move(opts)),
      info_(std::move(info)) {
  if (labels_.empty()) throw ModelError("maxent: empty label set");
  if (weights_.size() != vocab_.size() * labels_.size()) throw ModelError("maxent: weight table size mismatch");
  for (double w : weights_) {
    if (!std::isfinite(w)) throw ModelError("maxent: non-finite weight");
  }
}

std::vector<double> MaxEntModel::distribution(const FeatureVector& fv) const {
  std::vector<double> p(labels_.size());
  FeatureVector known;
  if (!fv.empty() && fv.ids().back() >= vocab_.size()) {
    std::vector<FeatureId> ids;
    for (auto f : fv) {
      if (f < vocab_.size()) ids.push_back(f);
    }
    known = FeatureVector(std::move(ids));
    scores_into(weights_, labels_.size(), known, p);
  } else {
    scores_into(weights_, labels_.size(), fv, p);
  }
  normalize(p);
  return p;
}

MaxEntModel::Prediction MaxEntModel::classify(const FeatureVector& fv) const {
  Prediction out;
  out.distribution = distribution(fv);
  out.label = labels_.labels()[labels_.argmax(std::span<const double>(out.distribution))];
  return out;
}

MaxEntModel::Prediction MaxEntModel::classify(const Example& example) const {
  return classify(extract(example, mode_, vocab_, opts_));
}

MaxEntModel train_maxent(const std::vector<FeatureVector>& contexts, const std::vector<std::size_t>& labels,
                         Vocabulary vocab, LabelSet label_set, FeatureSet mode, const MaxEntOptions& options,
                         const FeatureOptions& opts) {
  if (contexts.empty()) throw TrainingError("maxent: empty training set");
  if (contexts.size() != labels.size()) throw ArgumentError("maxent: contexts and labels differ in length");
  if (!(options.tol > 0.0)) throw ArgumentError("maxent: tol must be positive");
  if (label_set.empty()) throw ArgumentError("maxent: empty label set");
  for (auto l : labels) {
    if (l >= label_set.size()) throw ArgumentError("maxent: label index out of range");
  }

  const std::size_t n_labels = label_set.size();
  const std::size_t dim = vocab.size() * n_labels;
  const double bound = options.weight_bound;
  const double target = options.tol * static_cast<double>(contexts.size());
  Objective objective(contexts, labels, vocab.size(), n_labels, options.prior_variance);

  MaxEntTrainingInfo info;
  std::vector<double> w(dim, 0.0), g(dim), w_new(dim), g_new(dim), dir(dim), pg(dim);
  double residual = 0.0;
  double f = objective.evaluate(w, g, residual);

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> history;
  info.stop = StopReason::IterationCap;

  // Projected L-BFGS: coordinates pinned at the clamp with the gradient
  // pushing outward are frozen for the step.
  auto pinned = [&](std::size_t j) {
    return (w[j] <= -bound && g[j] > 0.0) || (w[j] >= bound && g[j] < 0.0);
  };

  std::size_t it = 0;
  for (; it < options.max_iters; ++it) {
    if (residual <= target) {
      info.stop = StopReason::Converged;
      break;
    }
    for (std::size_t j = 0; j < dim; ++j) pg[j] = pinned(j) ? 0.0 : g[j];

    // Two-loop recursion.
    dir = pg;
    std::vector<double> alpha(history.size());
    for (std::size_t h = history.size(); h-- > 0;) {
      alpha[h] = history[h].rho * dot(history[h].s, dir);
      for (std::size_t j = 0; j < dim; ++j) dir[j] -= alpha[h] * history[h].y[j];
    }
    if (!history.empty()) {
      const auto& last = history.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (auto& d : dir) d *= gamma;
    } else {
      const double norm = std::sqrt(dot(pg, pg));
      for (auto& d : dir) d /= std::max(norm, 1.0);
    }
    for (std::size_t h = 0; h < history.size(); ++h) {
      const double beta = history[h].rho * dot(history[h].y, dir);
      for (std::size_t j = 0; j < dim; ++j) dir[j] += history[h].s[j] * (alpha[h] - beta);
    }
    for (std::size_t j = 0; j < dim; ++j) dir[j] = pinned(j) ? 0.0 : -dir[j];
    if (dot(dir, pg) >= 0.0) {
      history.clear();
      for (std::size_t j = 0; j < dim; ++j) dir[j] = -pg[j];
    }

    // Backtracking line search on the projected path.
    double step = 1.0;
    double f_new = f, res_new = residual;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries, step *= 0.5) {
      for (std::size_t j = 0; j < dim; ++j) w_new[j] = std::clamp(w[j] + step * dir[j], -bound, bound);
      double decrease = 0.0;
      for (std::size_t j = 0; j < dim; ++j) decrease += g[j] * (w_new[j] - w[j]);
      if (decrease >= 0.0) continue;
      f_new = objective.evaluate(w_new, g_new, res_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      info.stop = StopReason::Stalled;
      break;
    }

    Pair p{std::vector<double>(dim), std::vector<double>(dim), 0.0};
    for (std::size_t j = 0; j < dim; ++j) {
      p.s[j] = w_new[j] - w[j];
      p.y[j] = g_new[j] - g[j];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 1e-12) {
      p.rho = 1.0 / sy;
      history.push_back(std::move(p));
      if (history.size() > options.history) history.pop_front();
    }
    w.swap(w_new);
    g.swap(g_new);
    f = f_new;
    residual = res_new;
  }
  if (it == options.max_iters && residual <= target) info.stop = StopReason::Converged;

  info.iterations = it;
  info.residual = residual;
  info.clamped = static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [&](double x) { return std::abs(x) >= bound; }));
  if (info.clamped > 0) {
    info.warnings.push_back(std::to_string(info.clamped) + " weight(s) clamped at +-" + std::to_string(bound));
  }
  if (info.stop != StopReason::Converged) {
    info.warnings.push_back(std::string("maxent stopped early (") + std::string(to_string(info.stop)) +
                            "), residual " + std::to_string(residual));
  }
  return MaxEntModel(std::move(vocab), std::move(label_set), std::move(w), mode, opts, std::move(info));
}

MaxEntModel train_maxent(const Dataset& train, FeatureSet mode, const MaxEntOptions& options,
                         const FeatureOptions& opts) {
  if (train.empty()) throw TrainingError("maxent: empty training set");
  Vocabulary vocab;
  std::vector<FeatureVector> contexts;
  std::vector<std::size_t> labels;
  contexts.reserve(train.size());
  labels.reserve(train.size());
  for (const auto& ex : train.examples()) {
    contexts.push_back(extract(ex, mode, vocab, false, opts));
    labels.push_back(*train.label_inventory().index_of(ex.label));
  }
  return train_maxent(contexts, labels, std::move(vocab), train.label_inventory(), mode, options, opts);
}

}  // namespace tamlearn
