#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "deptype/error.hpp"
#include "deptype/nn/tensor.hpp"
#include "deptype/rng.hpp"

namespace deptype {

// CART classification tree over dense features, stored as flat node arrays.
// Internal nodes send x[feature] <= threshold to the left child; leaves hold
// the majority class of their training samples.
struct DecisionTree {
  std::vector<int> feature;  // -1 for leaves
  std::vector<double> threshold;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<int> leaf_class;

  int predict(std::span<const double> x) const {
    int node = 0;
    while (feature[node] >= 0) node = x[feature[node]] <= threshold[node] ? left[node] : right[node];
    return leaf_class[node];
  }
  int node_count() const { return static_cast<int>(feature.size()); }
};

struct ForestOptions {
  int n_trees = 100;
  int max_depth = 0;  // 0: unlimited
  bool bootstrap = true;
  bool feature_subsample = true;  // sqrt(d) candidate features per split
  int min_samples_split = 2;
  std::uint64_t seed = 42;
};

struct RandomForestModel {
  int n_classes = 0;
  int dim = 0;
  std::vector<DecisionTree> trees;

  // Fraction of trees voting for each class.
  std::vector<double> vote_fractions(std::span<const double> x) const {
    std::vector<double> votes(static_cast<std::size_t>(n_classes), 0.0);
    for (const auto& t : trees) votes[t.predict(x)] += 1.0;
    for (auto& v : votes) v /= static_cast<double>(trees.size());
    return votes;
  }
};

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> y, int n_classes, const ForestOptions& opt, Rng& rng)
      : x_(x), y_(y), n_classes_(n_classes), opt_(opt), rng_(rng) {
    features_.resize(static_cast<std::size_t>(x.cols));
    std::iota(features_.begin(), features_.end(), 0);
    max_features_ = opt.feature_subsample
                        ? std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(x.cols)))))
                        : x.cols;
  }

  DecisionTree build(std::vector<int> samples) {
    tree_ = DecisionTree{};
    grow(samples, 0);
    return std::move(tree_);
  }

 private:
  int new_node() {
    tree_.feature.push_back(-1);
    tree_.threshold.push_back(0.0);
    tree_.left.push_back(-1);
    tree_.right.push_back(-1);
    tree_.leaf_class.push_back(0);
    return tree_.node_count() - 1;
  }

  std::vector<int> class_counts(std::span<const int> samples) const {
    std::vector<int> counts(static_cast<std::size_t>(n_classes_), 0);
    for (int s : samples) ++counts[y_[s]];
    return counts;
  }

  static double gini(const std::vector<int>& counts, int total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (int c : counts) {
      const double p = static_cast<double>(c) / total;
      g -= p * p;
    }
    return g;
  }

  int grow(std::vector<int>& samples, int depth) {
    const int node = new_node();
    const auto counts = class_counts(samples);
    tree_.leaf_class[node] = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    const int total = static_cast<int>(samples.size());
    const bool pure = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;
    if (pure || total < opt_.min_samples_split || (opt_.max_depth > 0 && depth >= opt_.max_depth)) return node;

    const double parent = gini(counts, total);
    double best_score = parent - 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;

    // Visit features in a random order and stop once max_features of them
    // were splittable; keep going past that while nothing valid was found.
    if (opt_.feature_subsample) rng_.shuffle(std::span<int>(features_));
    int evaluated = 0;
    std::vector<std::pair<double, int>> column(samples.size());
    for (int f : features_) {
      if (evaluated >= max_features_ && best_feature >= 0) break;
      for (std::size_t i = 0; i < samples.size(); ++i) column[i] = {x_(samples[i], f), y_[samples[i]]};
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      ++evaluated;
      std::vector<int> left_counts(static_cast<std::size_t>(n_classes_), 0);
      std::vector<int> right_counts = counts;
      for (int i = 0; i + 1 < total; ++i) {
        ++left_counts[column[i].second];
        --right_counts[column[i].second];
        if (column[i].first == column[i + 1].first) continue;
        const int nl = i + 1, nr = total - nl;
        const double score = (nl * gini(left_counts, nl) + nr * gini(right_counts, nr)) / total;
        if (score < best_score) {
          best_score = score;
          best_feature = f;
          best_threshold = 0.5 * (column[i].first + column[i + 1].first);
        }
      }
    }
    if (best_feature < 0) return node;

    std::vector<int> left_samples, right_samples;
    for (int s : samples) (x_(s, best_feature) <= best_threshold ? left_samples : right_samples).push_back(s);
    samples.clear();
    samples.shrink_to_fit();
    tree_.feature[node] = best_feature;
    tree_.threshold[node] = best_threshold;
    const int l = grow(left_samples, depth + 1);
    tree_.left[node] = l;
    const int r = grow(right_samples, depth + 1);
    tree_.right[node] = r;
    return node;
  }

  const Matrix& x_;
  std::span<const int> y_;
  int n_classes_;
  const ForestOptions& opt_;
  Rng& rng_;
  std::vector<int> features_;
  int max_features_;
  DecisionTree tree_;
};

}  // namespace detail

inline DecisionTree train_decision_tree(const Matrix& x, std::span<const int> y, int n_classes,
                                        const ForestOptions& opt) {
  Rng rng(opt.seed);
  detail::TreeBuilder builder(x, y, n_classes, opt, rng);
  std::vector<int> all(static_cast<std::size_t>(x.rows));
  std::iota(all.begin(), all.end(), 0);
  return builder.build(std::move(all));
}

inline RandomForestModel train_random_forest(const Matrix& x, std::span<const int> y, int n_classes,
                                             const ForestOptions& opt) {
  if (opt.n_trees < 1) throw DataError("random forest needs n_trees >= 1");
  if (x.rows == 0) throw DataError("random forest training set is empty");
  if (static_cast<int>(y.size()) != x.rows) throw DataError("feature rows and labels differ in length");
  for (int label : y)
    if (label < 0 || label >= n_classes) throw DataError("label out of range");
  RandomForestModel forest;
  forest.n_classes = n_classes;
  forest.dim = x.cols;
  Rng rng(opt.seed);
  detail::TreeBuilder builder(x, y, n_classes, opt, rng);
  for (int t = 0; t < opt.n_trees; ++t) {
    std::vector<int> samples(static_cast<std::size_t>(x.rows));
    if (opt.bootstrap) {
      for (auto& s : samples) s = static_cast<int>(rng.below(static_cast<std::uint64_t>(x.rows)));
      std::sort(samples.begin(), samples.end());
    } else {
      std::iota(samples.begin(), samples.end(), 0);
    }
    forest.trees.push_back(builder.build(std::move(samples)));
  }
  return forest;
}

}  // namespace deptype
