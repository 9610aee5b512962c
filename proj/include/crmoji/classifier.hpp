#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crmoji/random.hpp"

namespace crmoji {

enum class MaxFeatures { Sqrt, All, Fixed };

struct ForestParams {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;  // nullopt: unlimited
  std::size_t min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::Sqrt;
  std::size_t fixed_features = 0;  // used with MaxFeatures::Fixed
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0: hardware concurrency; never affects results

  void validate(std::size_t feature_count) const;
};

/// Row-major samples with binary labels (1 = Useful).
struct TrainingView {
  std::span<const std::vector<double>> rows;
  std::span<const int> labels;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] <= threshold goes left
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t negatives = 0;  // class frequencies of the (bootstrap) samples reaching the node
  std::uint32_t positives = 0;
};

class DecisionTree {
 public:
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  /// Positive-class frequency of the leaf `x` lands in.
  double positive_frequency(std::span<const double> x) const;
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

struct RandomForestModel {
  std::vector<DecisionTree> trees;
  std::size_t feature_count = 0;
  ForestParams params;
  /// Columns not constant over the training rows; the only split candidates.
  std::vector<std::size_t> informative_features;
};

/// Tree t is grown on rng(seed ^ t): first n bootstrap draws, then the
/// per-node feature draws. Throws ValidationError on single-class labels,
/// ragged rows or non-finite features.
RandomForestModel train_forest(TrainingView data, const ForestParams& params);

/// The bootstrap draw tree `tree_index` uses.
std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed, std::size_t tree_index);

/// Number of candidate features per node for `informative` usable columns.
std::size_t candidate_feature_count(const ForestParams& params, std::size_t informative);

struct Prediction {
  int label = 0;
  double score = 0.0;  // mean positive-leaf frequency
};

/// label = 1 iff score >= 0.5. Throws ValidationError on dimension mismatch.
Prediction predict(const RandomForestModel& model, std::span<const double> x);

/// JSON dump of every tree, for debugging.
std::string forest_to_json(const RandomForestModel& model);

// ---------------------------------------------------------------------------
// Evaluation

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Zero when any marginal in the denominator is zero.
double mcc(const Confusion& c);

struct EvalMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  Confusion confusion;

  friend bool operator==(const EvalMetrics&, const EvalMetrics&) = default;
};

EvalMetrics metrics_from_confusion(const Confusion& c);

/// fold index per sample. Each class is shuffled with rng(seed), class 0
/// first, then dealt round-robin starting at fold 0. Throws ValidationError
/// if a class has fewer than k members.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

/// Out-of-fold predictions pooled into one confusion matrix. Every fold
/// trains with `params` unchanged; folds come from params.seed.
EvalMetrics evaluate_cv(TrainingView data, std::size_t k, const ForestParams& params);

struct MetricsRow {
  std::string dataset;
  std::string mode;
  EvalMetrics metrics;
};

struct DeltaReport {
  std::string dataset;
  std::string mode;
  // percentage points, with minus without
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double mcc = 0.0;
  double f1 = 0.0;
};

/// Throws ValidationError if the rows come from different datasets.
DeltaReport delta_report(const MetricsRow& with, const MetricsRow& without, const std::string& mode);

/// One decimal, never "-0.0".
std::string format_points(double points);

/// `dataset,mode,P,R,A,M,F1` with metrics as fractions.
void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows);
/// Same columns, percentage points with one decimal.
void write_delta_csv(std::ostream& out, std::span<const DeltaReport> rows);

}  // namespace crmoji
