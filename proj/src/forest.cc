/* Copyright 2026 The cvd Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cvd/forest.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>
#include <tuple>

#include "cvd/error.h"
#include "cvd/random.h"

namespace cvd {
namespace {

double Gini(std::span<const double> counts, double total) {
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts) s += (c / total) * (c / total);
  return 1.0 - s;
}

struct SplitChoice {
  bool valid = false;
  double impurity = 0.0;  // weighted child impurity * n
  int feature = -1;
  double threshold = 0.0;
};

bool Better(const SplitChoice& a, const SplitChoice& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  return std::tie(a.impurity, a.feature, a.threshold) <
         std::tie(b.impurity, b.feature, b.threshold);
}

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, std::span<const int> y, int n_classes,
              const ForestParams& params, uint64_t seed)
      : x_(x),
        y_(y),
        n_classes_(n_classes),
        params_(params),
        rng_(SplitMix64(seed)),
        importance_(x.cols(), 0.0) {
    const int d = int(x.cols());
    mtry_ = params.max_features > 0
                ? std::min(params.max_features, d)
                : std::max(1, int(std::floor(std::sqrt(double(d)))));
  }

  DecisionTree Build() {
    const size_t n = size_t(x_.rows());
    std::vector<int> sample(n);
    for (size_t i = 0; i < n; ++i) sample[i] = int(rng_.UniformIndex(n));
    std::sort(sample.begin(), sample.end());
    Grow(sample, 0);
    return std::move(tree_);
  }

  const std::vector<double>& importance() const { return importance_; }

 private:
  int Grow(std::vector<int>& idx, int depth) {
    const int node_id = int(tree_.nodes.size());
    tree_.nodes.emplace_back();

    std::vector<double> counts(n_classes_, 0.0);
    for (int i : idx) counts[y_[i]] += 1.0;
    const double n = double(idx.size());
    const double gini = Gini(counts, n);
    const bool depth_done = params_.max_depth >= 0 && depth >= params_.max_depth;
    const bool too_small = idx.size() < size_t(2 * params_.min_leaf);

    SplitChoice best;
    if (!depth_done && !too_small && gini > 0.0) best = FindSplit(idx, counts);

    if (!best.valid) {
      TreeNode& leaf = tree_.nodes[node_id];
      leaf.counts.resize(n_classes_);
      for (int c = 0; c < n_classes_; ++c) leaf.counts[c] = uint32_t(counts[c]);
      return node_id;
    }

    std::vector<int> left, right;
    for (int i : idx) {
      (x_(i, best.feature) <= best.threshold ? left : right).push_back(i);
    }
    importance_[best.feature] += n * gini - best.impurity;
    idx.clear();
    idx.shrink_to_fit();

    const int l = Grow(left, depth + 1);
    const int r = Grow(right, depth + 1);
    TreeNode& node = tree_.nodes[node_id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return node_id;
  }

  SplitChoice FindSplit(const std::vector<int>& idx,
                        const std::vector<double>& counts) {
    const int d = int(x_.cols());
    std::vector<int> features(d);
    std::iota(features.begin(), features.end(), 0);

    SplitChoice best;
    std::vector<std::pair<double, int>> column(idx.size());
    std::vector<double> left(n_classes_), right(n_classes_);
    const double n = double(idx.size());
    const double min_leaf = double(params_.min_leaf);

    // Draw features without replacement; keep going past mtry until some
    // valid partition turns up.
    for (int drawn = 0; drawn < d; ++drawn) {
      if (drawn >= mtry_ && best.valid) break;
      const int pick = drawn + int(rng_.UniformIndex(size_t(d - drawn)));
      std::swap(features[drawn], features[pick]);
      const int f = features[drawn];

      for (size_t k = 0; k < idx.size(); ++k) {
        column[k] = {x_(idx[k], f), y_[idx[k]]};
      }
      std::sort(column.begin(), column.end());
      std::fill(left.begin(), left.end(), 0.0);
      right = counts;
      for (size_t k = 0; k + 1 < column.size(); ++k) {
        left[column[k].second] += 1.0;
        right[column[k].second] -= 1.0;
        const double nl = double(k + 1), nr = n - nl;
        if (column[k].first == column[k + 1].first) continue;
        if (nl < min_leaf || nr < min_leaf) continue;
        SplitChoice cand;
        cand.valid = true;
        cand.impurity = nl * Gini(left, nl) + nr * Gini(right, nr);
        cand.feature = f;
        const double lo = column[k].first, hi = column[k + 1].first;
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        cand.threshold = mid;
        if (Better(cand, best)) best = cand;
      }
    }
    return best;
  }

  const Eigen::MatrixXd& x_;
  std::span<const int> y_;
  int n_classes_;
  ForestParams params_;
  Rng rng_;
  int mtry_ = 1;
  DecisionTree tree_;
  std::vector<double> importance_;
};

}  // namespace

ForestFit TrainForest(const Eigen::MatrixXd& x, std::span<const int> y,
                      int n_classes, const ForestParams& params, uint64_t seed,
                      int workers) {
  if (size_t(x.rows()) != y.size() || x.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "feature rows and labels differ");
  }
  if (params.n_trees < 1 || params.min_leaf < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_trees and min_leaf must be >= 1");
  }
  std::vector<int> seen(n_classes, 0);
  for (int c : y) {
    if (c < 0 || c >= n_classes) {
      throw Error(ErrorCode::kInvalidArgument, "label out of range");
    }
    seen[c] = 1;
  }
  if (std::accumulate(seen.begin(), seen.end(), 0) < 2) {
    throw Error(ErrorCode::kSingleClassData, "training data has one class");
  }
  if (!x.allFinite()) {
    throw Error(ErrorCode::kNonFiniteFeature, "non-finite training feature");
  }

  ForestFit fit;
  fit.forest.n_features = int(x.cols());
  fit.forest.n_classes = n_classes;
  fit.forest.trees.resize(params.n_trees);
  std::vector<std::vector<double>> tree_importance(params.n_trees);

  std::atomic<int> next{0};
  auto work = [&] {
    for (int t = next++; t < params.n_trees; t = next++) {
      TreeBuilder builder(x, y, n_classes, params, seed + uint64_t(t));
      fit.forest.trees[t] = builder.Build();
      tree_importance[t] = builder.importance();
    }
  };
  const int n_workers = std::clamp(workers, 1, params.n_trees);
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }

  fit.importances.assign(x.cols(), 0.0);
  int contributing = 0;
  for (const auto& imp : tree_importance) {
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total <= 0.0) continue;
    ++contributing;
    for (size_t f = 0; f < imp.size(); ++f) fit.importances[f] += imp[f] / total;
  }
  if (contributing > 0) {
    for (double& v : fit.importances) v /= contributing;
  }
  return fit;
}

std::vector<double> PredictProba(const Forest& forest,
                                 std::span<const double> x) {
  if (int(x.size()) != forest.n_features) {
    throw Error(ErrorCode::kDimensionMismatch,
                "forest expects " + std::to_string(forest.n_features) +
                    " features, got " + std::to_string(x.size()));
  }
  std::vector<double> proba(forest.n_classes, 0.0);
  for (const DecisionTree& tree : forest.trees) {
    int node = 0;
    while (tree.nodes[node].feature >= 0) {
      const TreeNode& t = tree.nodes[node];
      node = x[t.feature] <= t.threshold ? t.left : t.right;
    }
    const auto& counts = tree.nodes[node].counts;
    double total = 0.0;
    for (uint32_t c : counts) total += c;
    for (int c = 0; c < forest.n_classes; ++c) proba[c] += counts[c] / total;
  }
  for (double& p : proba) p /= double(forest.trees.size());
  return proba;
}

}  // namespace cvd
