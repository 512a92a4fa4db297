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

#include "support/fixtures.h"

#include <algorithm>
#include <random>

namespace cvd::testing {

Dataset XorBlobs(int per_cluster, double sigma, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  Dataset d;
  d.x.resize(4 * per_cluster, 2);
  int row = 0;
  for (int cx : {-1, 1}) {
    for (int cy : {-1, 1}) {
      for (int i = 0; i < per_cluster; ++i, ++row) {
        d.x(row, 0) = cx + noise(gen);
        d.x(row, 1) = cy + noise(gen);
        d.y.push_back(cx == cy ? 1 : 0);
      }
    }
  }
  return d;
}

Dataset ShiftedColumns(int n, int d, std::vector<int> informative,
                       double shift, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset out;
  out.x.resize(n, d);
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    out.y.push_back(label);
    for (int j = 0; j < d; ++j) out.x(i, j) = normal(gen);
    for (int j : informative) out.x(i, j) += shift * label;
  }
  return out;
}

Dataset Gaussians(int n, int d, int n_classes, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset out;
  out.x.resize(n, d);
  for (int i = 0; i < n; ++i) {
    const int c = i % n_classes;
    out.y.push_back(c);
    for (int j = 0; j < d; ++j) out.x(i, j) = normal(gen) + c * (j + 1);
  }
  return out;
}

double Accuracy(const std::vector<std::vector<double>>& proba,
                const std::vector<int>& y) {
  int correct = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    const auto& p = proba[i];
    const int pred = int(std::max_element(p.begin(), p.end()) - p.begin());
    correct += pred == y[i];
  }
  return double(correct) / double(y.size());
}

}  // namespace cvd::testing
