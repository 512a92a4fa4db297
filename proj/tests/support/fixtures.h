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

#ifndef CVD_TESTS_SUPPORT_FIXTURES_H_
#define CVD_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cvd::testing {

struct Dataset {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

// Four Gaussian blobs at (+-1, +-1); class 1 when both coordinates share a
// sign.
Dataset XorBlobs(int per_cluster, double sigma, uint64_t seed);

// Two columns shifted by `shift` standard deviations for class 1, the rest
// pure noise. Classes alternate by row.
Dataset ShiftedColumns(int n, int d, std::vector<int> informative,
                       double shift, uint64_t seed);

// Classes alternate; column j of class c is N(c * (j + 1), 1).
Dataset Gaussians(int n, int d, int n_classes, uint64_t seed);

double Accuracy(const std::vector<std::vector<double>>& proba,
                const std::vector<int>& y);

}  // namespace cvd::testing

#endif  // CVD_TESTS_SUPPORT_FIXTURES_H_
