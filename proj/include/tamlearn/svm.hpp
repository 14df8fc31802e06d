#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tamlearn/corpus.hpp"
#include "tamlearn/features.hpp"

namespace tamlearn {

/// Polynomial kernel (x·y + 1)^d on binary vectors.
double kernel(const FeatureVector& x, const FeatureVector& y, int degree);

/// How the threshold b is set after the dual is solved. Extremes is the
/// midpoint rule over all training examples (see extreme_bias). DualOptimal
/// averages y_i G_i over free support vectors, falling back to the midpoint of
/// the feasible interval, as libsvm does; it differs from Extremes when
/// bounded support vectors are misclassified.
enum class BiasRule { Extremes, DualOptimal };

std::string_view to_string(BiasRule r);
BiasRule bias_rule_from_string(std::string_view s);

struct SvmOptions {
  double C = 1.0;
  int degree = 1;
  double eps = 1e-3;           // stop when the maximal KKT violating pair gap < eps
  double tau = 1e-12;          // curvature floor for the two-variable update
  std::size_t max_iter_factor = 100;  // iteration cap = factor * l
  std::size_t cache_bytes = std::size_t{32} << 20;
  BiasRule bias = BiasRule::Extremes;
};

/// LRU cache of kernel matrix columns. Holds at least two columns, so the
/// pair of columns used by one update is never evicted mid-update.
class KernelCache {
 public:
  KernelCache(std::span<const FeatureVector> x, int degree, std::size_t capacity_bytes);

  std::span<const double> column(std::size_t i);
  double diagonal(std::size_t i) const { return diag_[i]; }
  std::size_t size() const noexcept { return x_.size(); }
  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }

 private:
  std::span<const FeatureVector> x_;
  int degree_;
  std::size_t max_columns_;
  std::vector<double> diag_;
  std::vector<std::vector<double>> columns_;
  std::list<std::size_t> lru_;  // front = most recent
  std::vector<std::optional<std::list<std::size_t>::iterator>> where_;
  std::size_t hits_ = 0, misses_ = 0;
};

/// Solution of the soft-margin dual
///   max  Σα_i - ½ Σ α_i α_j y_i y_j K(x_i, x_j)
///   s.t. 0 <= α_i <= C,  Σ α_i y_i = 0.
struct DualSolution {
  std::vector<double> alpha;
  std::vector<double> gradient;  // ∇(-L) = Qα - 1
  double objective = 0.0;        // L(α)
  double max_violation = 0.0;    // maximal violating pair gap at exit
  std::size_t iterations = 0;
  double bias = 0.0;             // b by SvmOptions::bias
};

/// Two-variable analytic coordinate ascent with second-order working set
/// selection. Throws TrainingError (carrying the dual value reached) when the
/// iteration cap is hit.
DualSolution solve_dual(std::span<const FeatureVector> x, std::span<const int> y, const SvmOptions& options);

/// b = -(max_{y_i=-1} b_i + min_{y_i=+1} b_i) / 2 with b_i = Σ_j α_j y_j K(x_j, x_i).
/// `partial[i]` holds b_i.
double extreme_bias(std::span<const double> partial, std::span<const int> y);

/// -rho of libsvm: b from the free support vectors, or the middle of the
/// interval allowed by the bounded ones. `gradient` is Qα - 1.
double dual_optimal_bias(std::span<const double> alpha, std::span<const double> gradient, std::span<const int> y,
                         double C);

struct Decision {
  double raw = 0.0;
  int sign = 1;  // +1 iff raw >= 0
};

class BinarySvmModel {
 public:
  BinarySvmModel() = default;
  BinarySvmModel(std::vector<FeatureVector> support, std::vector<int> y, std::vector<double> alpha, double b,
                 int degree, double C);

  const std::vector<FeatureVector>& support_vectors() const noexcept { return support_; }
  const std::vector<int>& y() const noexcept { return y_; }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double bias() const noexcept { return b_; }
  int degree() const noexcept { return degree_; }
  double C() const noexcept { return C_; }

  Decision decide(const FeatureVector& x) const;

  // Solver diagnostics, not serialized.
  double dual_objective = 0.0;
  double max_violation = 0.0;
  std::size_t iterations = 0;

 private:
  std::vector<FeatureVector> support_;
  std::vector<int> y_;
  std::vector<double> alpha_;
  double b_ = 0.0;
  int degree_ = 1;
  double C_ = 1.0;
};

/// Trains on (x_i, y_i), y_i ∈ {+1, -1}; keeps only vectors with α_i > 0.
BinarySvmModel train_binary_svm(std::span<const FeatureVector> x, std::span<const int> y,
                                const SvmOptions& options = {});

inline Decision decide(const BinarySvmModel& model, const FeatureVector& x) { return model.decide(x); }

/// One-versus-one multiclass SVM. Classifier (a, b) with label index a < b
/// maps label a to +1 and b to -1. A single label gives no classifiers and
/// is always predicted.
class PairwiseModel {
 public:
  struct Pair {
    std::size_t positive = 0;  // label index, +1 side
    std::size_t negative = 0;  // label index, -1 side
    /// Absent when one side had no training examples.
    std::optional<BinarySvmModel> model;
    std::size_t default_winner = 0;  // used when `model` is absent
  };

  PairwiseModel(Vocabulary vocab, LabelSet labels, std::vector<Pair> pairs, FeatureSet mode, FeatureOptions opts,
                SvmOptions svm);

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const LabelSet& labels() const noexcept { return labels_; }
  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  FeatureSet mode() const noexcept { return mode_; }
  const FeatureOptions& options() const noexcept { return opts_; }
  const SvmOptions& svm_options() const noexcept { return svm_; }

  struct Prediction {
    std::string label;
    std::vector<std::size_t> votes;  // per label index; sums to N(N-1)/2
  };

  Prediction classify(const FeatureVector& fv) const;
  Prediction classify(const Example& example) const;

 private:
  Vocabulary vocab_;
  LabelSet labels_;
  std::vector<Pair> pairs_;
  FeatureSet mode_;
  FeatureOptions opts_;
  SvmOptions svm_;
};

/// `label_universe`, when given, fixes the label list (e.g. all labels of a
/// corpus while training on one CV fold); labels absent from `train` get
/// degenerate pairs that vote for the other side.
PairwiseModel train_pairwise(const Dataset& train, FeatureSet mode, const SvmOptions& svm = {},
                             const FeatureOptions& opts = {},
                             const std::vector<std::string>& label_universe = {}, unsigned threads = 1);

inline std::string classify_pairwise(const PairwiseModel& model, const FeatureVector& fv) {
  return model.classify(fv).label;
}

}  // namespace tamlearn
