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

#ifndef CVD_STANDARDIZE_H_
#define CVD_STANDARDIZE_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cvd {

inline constexpr double kStdFloor = 1e-12;

// Per-feature z-scoring. Statistics are fitted on the training split only
// and travel with the model.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> std;  // population std, floored at kStdFloor

  static Standardizer Fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x) const;
  std::vector<double> Apply(std::span<const double> row) const;

  bool operator==(const Standardizer&) const = default;
};

}  // namespace cvd

#endif  // CVD_STANDARDIZE_H_
