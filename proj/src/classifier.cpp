#include "crmoji/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "crmoji/error.hpp"
#include "crmoji/parallel.hpp"

namespace crmoji {

void ForestParams::validate(std::size_t feature_count) const {
  if (n_trees == 0) throw ValidationError("n_trees must be positive");
  if (max_depth && *max_depth == 0) throw ValidationError("max_depth must be positive");
  if (min_samples_leaf == 0) throw ValidationError("min_samples_leaf must be positive");
  if (max_features == MaxFeatures::Fixed) {
    if (fixed_features == 0) throw ValidationError("fixed max_features must be positive");
    if (fixed_features > feature_count) throw ValidationError("fixed max_features exceeds feature count");
  }
}

std::size_t candidate_feature_count(const ForestParams& params, std::size_t informative) {
  if (informative == 0) return 0;
  std::size_t k = informative;
  switch (params.max_features) {
    case MaxFeatures::All: break;
    case MaxFeatures::Sqrt:
      k = static_cast<std::size_t>(std::sqrt(static_cast<double>(informative)));
      break;
    case MaxFeatures::Fixed: k = params.fixed_features; break;
  }
  return std::clamp<std::size_t>(k, 1, informative);
}

// ---------------------------------------------------------------------------
// Trees

double DecisionTree::positive_frequency(std::span<const double> x) const {
  std::uint32_t i = 0;
  while (nodes_[i].feature >= 0) {
    const auto& n = nodes_[i];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  const auto& leaf = nodes_[i];
  const double total = static_cast<double>(leaf.negatives) + static_cast<double>(leaf.positives);
  return total > 0 ? static_cast<double>(leaf.positives) / total : 0.0;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> depth(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    if (nodes_[i].feature >= 0) {
      depth[nodes_[i].left] = depth[i] + 1;
      depth[nodes_[i].right] = depth[i] + 1;
    }
  }
  return deepest;
}

namespace {

double gini(double neg, double pos) {
  const double n = neg + pos;
  if (n <= 0) return 0.0;
  const double p = pos / n;
  const double q = neg / n;
  return 1.0 - p * p - q * q;
}

constexpr double kMinGain = 1e-12;

class TreeGrower {
 public:
  TreeGrower(const std::vector<std::vector<double>>& columns, std::span<const int> labels,
             const std::vector<std::size_t>& informative, const ForestParams& params, Rng& rng)
      : columns_(columns), labels_(labels), informative_(informative), params_(params), rng_(rng) {
    k_ = candidate_feature_count(params, informative.size());
  }

  DecisionTree grow(std::vector<std::size_t> sample) {
    struct Task {
      std::uint32_t node;
      std::vector<std::size_t> samples;
      std::size_t depth;
    };
    nodes_.clear();
    nodes_.push_back(make_node(sample));
    std::vector<Task> stack;
    stack.push_back({0, std::move(sample), 0});
    while (!stack.empty()) {
      Task task = std::move(stack.back());
      stack.pop_back();
      const TreeNode& node = nodes_[task.node];
      if (node.negatives == 0 || node.positives == 0) continue;
      if (params_.max_depth && task.depth >= *params_.max_depth) continue;
      if (task.samples.size() < 2 * params_.min_samples_leaf) continue;

      const auto split = best_split(task.samples);
      if (!split) continue;

      std::vector<std::size_t> left;
      std::vector<std::size_t> right;
      const auto& col = columns_[split->feature];
      for (std::size_t s : task.samples) (col[s] <= split->threshold ? left : right).push_back(s);

      const auto left_id = static_cast<std::uint32_t>(nodes_.size());
      nodes_.push_back(make_node(left));
      const auto right_id = static_cast<std::uint32_t>(nodes_.size());
      nodes_.push_back(make_node(right));
      TreeNode& parent = nodes_[task.node];
      parent.feature = static_cast<int>(split->feature);
      parent.threshold = split->threshold;
      parent.left = left_id;
      parent.right = right_id;
      // Right is pushed first so the left subtree is expanded first.
      stack.push_back({right_id, std::move(right), task.depth + 1});
      stack.push_back({left_id, std::move(left), task.depth + 1});
    }
    return DecisionTree(std::move(nodes_));
  }

 private:
  struct Split {
    std::size_t feature;
    double threshold;
    double gain;
  };

  TreeNode make_node(const std::vector<std::size_t>& samples) const {
    TreeNode node;
    for (std::size_t s : samples) (labels_[s] == 1 ? node.positives : node.negatives)++;
    return node;
  }

  std::vector<std::size_t> draw_candidates() {
    if (k_ >= informative_.size()) return informative_;
    std::vector<std::size_t> pool = informative_;
    for (std::size_t i = 0; i < k_; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(rng_, pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k_);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  std::optional<Split> best_split(const std::vector<std::size_t>& samples) {
    const auto candidates = draw_candidates();
    double total_pos = 0;
    for (std::size_t s : samples) total_pos += labels_[s];
    const double n = static_cast<double>(samples.size());
    const double total_neg = n - total_pos;
    const double parent = gini(total_neg, total_pos);
    const std::size_t min_leaf = params_.min_samples_leaf;

    std::optional<Split> best;
    std::vector<std::pair<double, int>> values(samples.size());
    for (std::size_t f : candidates) {
      const auto& col = columns_[f];
      for (std::size_t i = 0; i < samples.size(); ++i) values[i] = {col[samples[i]], labels_[samples[i]]};
      std::sort(values.begin(), values.end());
      double left_pos = 0;
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        left_pos += values[i].second;
        if (values[i].first == values[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = values.size() - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const double nl = static_cast<double>(n_left);
        const double nr = static_cast<double>(n_right);
        const double right_pos = total_pos - left_pos;
        const double gain =
            parent - (nl / n) * gini(nl - left_pos, left_pos) - (nr / n) * gini(nr - right_pos, right_pos);
        // Candidates ascend by feature and thresholds ascend within one, so
        // a strict comparison keeps the lowest feature, then lowest threshold.
        if (gain > kMinGain && (!best || gain > best->gain)) {
          double threshold = values[i].first + (values[i + 1].first - values[i].first) / 2.0;
          if (!(threshold < values[i + 1].first)) threshold = values[i].first;
          best = Split{f, threshold, gain};
        }
      }
    }
    return best;
  }

  const std::vector<std::vector<double>>& columns_;
  std::span<const int> labels_;
  const std::vector<std::size_t>& informative_;
  const ForestParams& params_;
  Rng& rng_;
  std::size_t k_ = 0;
  std::vector<TreeNode> nodes_;
};

std::vector<std::size_t> draw_bootstrap(Rng& rng, std::size_t n) {
  std::vector<std::size_t> sample(n);
  for (auto& s : sample) s = static_cast<std::size_t>(uniform_below(rng, n));
  return sample;
}

}  // namespace

std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed, std::size_t tree_index) {
  Rng rng(seed ^ static_cast<std::uint64_t>(tree_index));
  return draw_bootstrap(rng, n);
}

RandomForestModel train_forest(TrainingView data, const ForestParams& params) {
  const std::size_t n = data.rows.size();
  if (n != data.labels.size()) throw ValidationError("row and label counts differ");
  if (n < 2) throw ValidationError("need at least 2 rows to train");
  const std::size_t d = data.rows.front().size();
  params.validate(d);

  bool has_pos = false;
  bool has_neg = false;
  for (int y : data.labels) {
    if (y != 0 && y != 1) throw ValidationError("labels must be 0 or 1");
    (y == 1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw ValidationError("training data has a single class");

  std::vector<std::vector<double>> columns(d, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (data.rows[r].size() != d) throw ValidationError("ragged design matrix at row " + std::to_string(r));
    for (std::size_t f = 0; f < d; ++f) {
      const double v = data.rows[r][f];
      if (!std::isfinite(v)) throw ValidationError("non-finite feature at row " + std::to_string(r));
      columns[f][r] = v;
    }
  }

  RandomForestModel model;
  model.feature_count = d;
  model.params = params;
  for (std::size_t f = 0; f < d; ++f) {
    const auto& col = columns[f];
    if (std::any_of(col.begin(), col.end(), [&](double v) { return v != col.front(); })) {
      model.informative_features.push_back(f);
    }
  }

  std::vector<std::optional<DecisionTree>> trees(params.n_trees);
  parallel_for(params.n_trees, params.threads, [&](std::size_t t) {
    Rng rng(params.seed ^ static_cast<std::uint64_t>(t));
    auto sample = draw_bootstrap(rng, n);
    TreeGrower grower(columns, data.labels, model.informative_features, params, rng);
    trees[t] = grower.grow(std::move(sample));
  });
  model.trees.reserve(params.n_trees);
  for (auto& t : trees) model.trees.push_back(std::move(*t));
  return model;
}

Prediction predict(const RandomForestModel& model, std::span<const double> x) {
  if (x.size() != model.feature_count) throw ValidationError("feature vector has wrong dimension");
  double sum = 0.0;
  for (const auto& tree : model.trees) sum += tree.positive_frequency(x);
  Prediction p;
  p.score = model.trees.empty() ? 0.0 : sum / static_cast<double>(model.trees.size());
  p.label = p.score >= 0.5 ? 1 : 0;
  return p;
}

std::string forest_to_json(const RandomForestModel& model) {
  nlohmann::json j;
  j["feature_count"] = model.feature_count;
  j["seed"] = model.params.seed;
  auto& trees = j["trees"] = nlohmann::json::array();
  for (const auto& tree : model.trees) {
    auto nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes()) {
      if (n.feature < 0) {
        nodes.push_back({{"leaf", {n.negatives, n.positives}}});
      } else {
        nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  return j.dump();
}

// ---------------------------------------------------------------------------
// Evaluation

double mcc(const Confusion& c) {
  const double tp = static_cast<double>(c.tp);
  const double tn = static_cast<double>(c.tn);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

EvalMetrics metrics_from_confusion(const Confusion& c) {
  EvalMetrics m;
  m.confusion = c;
  const double tp = static_cast<double>(c.tp);
  m.precision = c.tp + c.fp ? tp / static_cast<double>(c.tp + c.fp) : 0.0;
  m.recall = c.tp + c.fn ? tp / static_cast<double>(c.tp + c.fn) : 0.0;
  m.accuracy = c.total() ? static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total()) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.mcc = mcc(c);
  return m;
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("need at least 2 folds");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ValidationError("labels must be 0 or 1");
    by_class[labels[i]].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < k) {
      throw ValidationError("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                            " members, fewer than " + std::to_string(k) + " folds");
    }
  }
  Rng rng(seed);
  std::vector<std::size_t> fold(labels.size());
  for (auto& members : by_class) {
    shuffle<std::size_t>(members, rng);
    for (std::size_t i = 0; i < members.size(); ++i) fold[members[i]] = i % k;
  }
  return fold;
}

EvalMetrics evaluate_cv(TrainingView data, std::size_t k, const ForestParams& params) {
  if (data.rows.size() != data.labels.size()) throw ValidationError("row and label counts differ");
  const auto fold = stratified_folds(data.labels, k, params.seed);
  Confusion pooled;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::vector<double>> train_rows;
    std::vector<int> train_labels;
    std::vector<std::size_t> held_out;
    for (std::size_t i = 0; i < fold.size(); ++i) {
      if (fold[i] == f) {
        held_out.push_back(i);
      } else {
        train_rows.push_back(data.rows[i]);
        train_labels.push_back(data.labels[i]);
      }
    }
    const auto model = train_forest({train_rows, train_labels}, params);
    for (std::size_t i : held_out) {
      const int predicted = predict(model, data.rows[i]).label;
      const int actual = data.labels[i];
      if (predicted == 1 && actual == 1) ++pooled.tp;
      else if (predicted == 1) ++pooled.fp;
      else if (actual == 1) ++pooled.fn;
      else ++pooled.tn;
    }
  }
  return metrics_from_confusion(pooled);
}

DeltaReport delta_report(const MetricsRow& with, const MetricsRow& without, const std::string& mode) {
  if (with.dataset != without.dataset) {
    throw ValidationError("delta between different datasets: " + with.dataset + " vs " + without.dataset);
  }
  DeltaReport d;
  d.dataset = with.dataset;
  d.mode = mode;
  d.precision = 100.0 * (with.metrics.precision - without.metrics.precision);
  d.recall = 100.0 * (with.metrics.recall - without.metrics.recall);
  d.accuracy = 100.0 * (with.metrics.accuracy - without.metrics.accuracy);
  d.mcc = 100.0 * (with.metrics.mcc - without.metrics.mcc);
  d.f1 = 100.0 * (with.metrics.f1 - without.metrics.f1);
  return d;
}

std::string format_points(double points) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", points);
  std::string s = buf;
  if (s == "-0.0") s = "0.0";
  return s;
}

void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows) {
  out << "dataset,mode,P,R,A,M,F1\n";
  char buf[160];
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f", m.precision, m.recall, m.accuracy, m.mcc, m.f1);
    out << r.dataset << ',' << r.mode << ',' << buf << '\n';
  }
}

void write_delta_csv(std::ostream& out, std::span<const DeltaReport> rows) {
  out << "dataset,mode,P,R,A,M,F1\n";
  for (const auto& d : rows) {
    out << d.dataset << ',' << d.mode << ',' << format_points(d.precision) << ',' << format_points(d.recall) << ','
        << format_points(d.accuracy) << ',' << format_points(d.mcc) << ',' << format_points(d.f1) << '\n';
  }
}

}  // namespace crmoji
