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

#include "cvd/standardize.h"

#include <algorithm>
#include <cmath>

#include "cvd/error.h"

namespace cvd {

Standardizer Standardizer::Fit(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) {
    throw Error(ErrorCode::kInsufficientData, "cannot standardize zero rows");
  }
  Standardizer s;
  const double n = double(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto col = x.col(j);
    const double lo = col.minCoeff(), hi = col.maxCoeff();
    if (lo == hi) {
      // Exact for constant columns, which then map to exactly zero.
      s.mean.push_back(lo);
      s.std.push_back(kStdFloor);
      continue;
    }
    double sum = 0.0;
    for (double v : col) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    s.mean.push_back(mean);
    s.std.push_back(std::max(std::sqrt(ss / n), kStdFloor));
  }
  return s;
}

Eigen::MatrixXd Standardizer::Apply(const Eigen::MatrixXd& x) const {
  if (size_t(x.cols()) != mean.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "standardizer width differs");
  }
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out(i, j) = (x(i, j) - mean[j]) / std[j];
    }
  }
  return out;
}

std::vector<double> Standardizer::Apply(std::span<const double> row) const {
  if (row.size() != mean.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "standardizer width differs");
  }
  std::vector<double> out(row.size());
  for (size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / std[j];
  return out;
}

}  // namespace cvd
