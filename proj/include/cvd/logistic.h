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

#ifndef CVD_LOGISTIC_H_
#define CVD_LOGISTIC_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cvd {

struct LogisticParams {
  double l2 = 1e-2;
  int max_iters = 2000;
  double tol = 1e-6;
  // Use one softmax row per class even for two classes.
  bool force_multinomial = false;

  bool operator==(const LogisticParams&) const = default;
};

// Binary models keep one weight row scoring the second class against the
// first; multinomial models keep one row per class.
struct LogisticModel {
  int n_classes = 2;
  bool multinomial = false;
  Eigen::MatrixXd weights;  // rows x d
  Eigen::VectorXd bias;     // rows

  static LogisticModel Zero(int n_classes, int dim, bool multinomial);
  int rows() const { return int(weights.rows()); }
};

struct LogisticObjective {
  double loss = 0.0;
  LogisticModel gradient;
};

// Mean cross-entropy plus (l2 / 2) * ||W||^2; the bias is not penalized.
LogisticObjective EvaluateLogistic(const LogisticModel& model,
                                   const Eigen::MatrixXd& x,
                                   std::span<const int> y, double l2);

struct LogisticFit {
  LogisticModel model;
  std::vector<double> loss_history;  // initial loss, then each accepted step
  int iterations = 0;
  bool converged = false;
};

// Full-batch gradient descent with Armijo backtracking. Stops when the
// gradient infinity-norm drops below tol or after max_iters steps.
LogisticFit TrainLogistic(const Eigen::MatrixXd& x, std::span<const int> y,
                          int n_classes, const LogisticParams& params);

std::vector<double> PredictProba(const LogisticModel& model,
                                 std::span<const double> x);

}  // namespace cvd

#endif  // CVD_LOGISTIC_H_
