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

#ifndef CVD_FOREST_H_
#define CVD_FOREST_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cvd {

struct ForestParams {
  int n_trees = 100;
  int max_depth = -1;    // < 0: unbounded
  int min_leaf = 1;
  int max_features = 0;  // 0: floor(sqrt(d)), at least 1

  bool operator==(const ForestParams&) const = default;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;     // taken when x[feature] <= threshold
  int right = -1;
  std::vector<uint32_t> counts;  // leaves only: bootstrap class counts
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct Forest {
  int n_features = 0;
  int n_classes = 0;
  std::vector<DecisionTree> trees;
};

struct ForestFit {
  Forest forest;
  // Mean impurity decrease per feature, averaged over trees that split at
  // least once after normalizing each tree to unit sum.
  std::vector<double> importances;
};

// Bagged CART trees grown on Gini impurity. Tree t draws its bootstrap and
// per-node feature subsets from a stream seeded by seed + t, so the result
// does not depend on `workers`. Split ties go to the lowest feature index,
// then the lowest threshold.
ForestFit TrainForest(const Eigen::MatrixXd& x, std::span<const int> y,
                      int n_classes, const ForestParams& params, uint64_t seed,
                      int workers = 1);

// Mean of per-tree leaf class distributions.
std::vector<double> PredictProba(const Forest& forest,
                                 std::span<const double> x);

}  // namespace cvd

#endif  // CVD_FOREST_H_
