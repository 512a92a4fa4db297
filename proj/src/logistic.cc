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

#include "cvd/logistic.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cvd/error.h"

namespace cvd {
namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-20;

double Dot(const LogisticModel& a, const LogisticModel& b) {
  return (a.weights.array() * b.weights.array()).sum() + a.bias.dot(b.bias);
}

double InfNorm(const LogisticModel& g) {
  double m = g.weights.size() ? g.weights.cwiseAbs().maxCoeff() : 0.0;
  if (g.bias.size()) m = std::max(m, g.bias.cwiseAbs().maxCoeff());
  return m;
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LogisticModel LogisticModel::Zero(int n_classes, int dim, bool multinomial) {
  LogisticModel m;
  m.n_classes = n_classes;
  m.multinomial = multinomial || n_classes > 2;
  const int rows = m.multinomial ? n_classes : 1;
  m.weights = Eigen::MatrixXd::Zero(rows, dim);
  m.bias = Eigen::VectorXd::Zero(rows);
  return m;
}

LogisticObjective EvaluateLogistic(const LogisticModel& model,
                                   const Eigen::MatrixXd& x,
                                   std::span<const int> y, double l2) {
  const Eigen::Index n = x.rows();
  // scores: n x rows
  Eigen::MatrixXd scores = x * model.weights.transpose();
  scores.rowwise() += model.bias.transpose();

  Eigen::MatrixXd residual(n, model.rows());
  double loss = 0.0;
  if (!model.multinomial) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = scores(i, 0);
      const double target = y[i] == 1 ? 1.0 : 0.0;
      loss += Softplus(z) - target * z;
      residual(i, 0) = Sigmoid(z) - target;
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = scores.row(i).maxCoeff();
      double denom = 0.0;
      for (Eigen::Index c = 0; c < scores.cols(); ++c) {
        denom += std::exp(scores(i, c) - m);
      }
      const double log_z = m + std::log(denom);
      loss += log_z - scores(i, y[i]);
      for (Eigen::Index c = 0; c < scores.cols(); ++c) {
        residual(i, c) = std::exp(scores(i, c) - log_z) - (c == y[i] ? 1.0 : 0.0);
      }
    }
  }
  const double inv_n = 1.0 / double(n);
  LogisticObjective obj;
  obj.loss = loss * inv_n + 0.5 * l2 * model.weights.squaredNorm();
  obj.gradient = model;
  obj.gradient.weights = residual.transpose() * x * inv_n + l2 * model.weights;
  obj.gradient.bias = residual.colwise().sum().transpose() * inv_n;
  return obj;
}

LogisticFit TrainLogistic(const Eigen::MatrixXd& x, std::span<const int> y,
                          int n_classes, const LogisticParams& params) {
  if (size_t(x.rows()) != y.size() || x.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "feature rows and labels differ");
  }
  if (!x.allFinite()) {
    throw Error(ErrorCode::kNonFiniteFeature, "non-finite training feature");
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

  LogisticFit fit;
  fit.model = LogisticModel::Zero(n_classes, int(x.cols()),
                                  params.force_multinomial);
  LogisticObjective obj = EvaluateLogistic(fit.model, x, y, params.l2);
  fit.loss_history.push_back(obj.loss);

  double step = 1.0;
  for (int it = 0; it < params.max_iters; ++it) {
    if (InfNorm(obj.gradient) < params.tol) {
      fit.converged = true;
      break;
    }
    const double g2 = Dot(obj.gradient, obj.gradient);
    bool accepted = false;
    while (step >= kMinStep) {
      LogisticModel trial = fit.model;
      trial.weights -= step * obj.gradient.weights;
      trial.bias -= step * obj.gradient.bias;
      LogisticObjective next = EvaluateLogistic(trial, x, y, params.l2);
      if (next.loss <= obj.loss - kArmijo * step * g2) {
        fit.model = std::move(trial);
        obj = std::move(next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No representable descent step left: numerically at the optimum.
      fit.converged = true;
      break;
    }
    fit.loss_history.push_back(obj.loss);
    fit.iterations = it + 1;
    step = std::min(step * 2.0, 1e6);
  }
  if (!fit.converged && InfNorm(obj.gradient) < params.tol) fit.converged = true;
  return fit;
}

std::vector<double> PredictProba(const LogisticModel& model,
                                 std::span<const double> x) {
  if (Eigen::Index(x.size()) != model.weights.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "linear model expects " + std::to_string(model.weights.cols()) +
                    " features, got " + std::to_string(x.size()));
  }
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), Eigen::Index(x.size()));
  const Eigen::VectorXd scores = model.weights * v + model.bias;
  if (!model.multinomial) {
    const double p = Sigmoid(scores(0));
    return {1.0 - p, p};
  }
  const double m = scores.maxCoeff();
  std::vector<double> proba(model.n_classes);
  double denom = 0.0;
  for (int c = 0; c < model.n_classes; ++c) {
    proba[c] = std::exp(scores(c) - m);
    denom += proba[c];
  }
  for (double& p : proba) p /= denom;
  return proba;
}

}  // namespace cvd
