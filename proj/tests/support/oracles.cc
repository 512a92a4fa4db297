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

#include "support/oracles.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace cvd::testing {

std::vector<PauseSegment> BruteForcePauses(std::span<const double> x) {
  const size_t n = x.size();
  const size_t w = 100;
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  if (peak == 0.0) return {{0, n}};

  std::vector<bool> covered(n, false);
  for (size_t i = 0; i + w <= n; ++i) {
    double sum = 0.0;
    for (size_t j = i; j < i + w; ++j) sum += std::fabs(x[j]);
    if (sum / double(w) < 0.005 * peak) {
      for (size_t j = i; j < i + w; ++j) covered[j] = true;
    }
  }
  std::vector<PauseSegment> out;
  for (size_t i = 0; i < n;) {
    if (!covered[i]) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && covered[j]) ++j;
    out.push_back({i, j});
    i = j;
  }
  return out;
}

std::vector<SweepPoint> ExhaustiveSweep(std::span<const double> scores,
                                        std::span<const LabelKind> labels) {
  std::vector<double> thresholds(scores.begin(), scores.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  const double inf = std::numeric_limits<double>::infinity();
  thresholds.insert(thresholds.begin(), inf);
  thresholds.push_back(-inf);

  std::vector<SweepPoint> out;
  for (double t : thresholds) {
    int syn = 0, real = 0, syn_as_real = 0, real_as_syn = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      const bool called_synthetic = scores[i] >= t;
      if (labels[i] == LabelKind::kSynthetic) {
        ++syn;
        if (!called_synthetic) ++syn_as_real;
      } else {
        ++real;
        if (called_synthetic) ++real_as_syn;
      }
    }
    out.push_back({t, double(syn_as_real) / syn, double(real_as_syn) / real});
  }
  return out;
}

double BruteForceEer(std::span<const double> scores,
                     std::span<const LabelKind> labels) {
  const auto sweep = ExhaustiveSweep(scores, labels);
  for (size_t i = 0; i < sweep.size(); ++i) {
    const double gap = sweep[i].frr - sweep[i].far;
    if (gap == 0.0) return 100.0 * sweep[i].far;
    if (gap > 0.0) {
      const SweepPoint& a = sweep[i - 1];
      const SweepPoint& b = sweep[i];
      // far_a + s (far_b - far_a) == frr_a + s (frr_b - frr_a)
      const double s = (a.far - a.frr) / ((a.far - a.frr) - (b.far - b.frr));
      const double far = a.far + s * (b.far - a.far);
      const double frr = a.frr + s * (b.frr - a.frr);
      return 100.0 * 0.5 * (far + frr);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double NumericStudentTwoSidedP(double t, double dof) {
  const double log_norm = std::lgamma((dof + 1.0) / 2.0) -
                          std::lgamma(dof / 2.0) -
                          0.5 * std::log(dof * std::numbers::pi);
  auto density = [&](double x) {
    return std::exp(log_norm - (dof + 1.0) / 2.0 * std::log1p(x * x / dof));
  };
  // Tail integral over [|t|, inf) with x = |t| + u / (1 - u).
  const double a = std::fabs(t);
  auto g = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double x = a + u / (1.0 - u);
    return density(x) / ((1.0 - u) * (1.0 - u));
  };
  const int n = 1 << 20;
  const double h = 1.0 / n;
  double sum = g(0.0) + g(1.0);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(i * h);
  return std::min(1.0, 2.0 * sum * h / 3.0);
}

double ScalarLogisticLoss(const LogisticModel& model, const Eigen::MatrixXd& x,
                          std::span<const int> y, double l2) {
  const int rows = int(model.weights.rows());
  const int d = int(model.weights.cols());
  double total = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    std::vector<double> z(rows);
    for (int r = 0; r < rows; ++r) {
      double s = model.bias(r);
      for (int j = 0; j < d; ++j) s += model.weights(r, j) * x(i, j);
      z[r] = s;
    }
    if (!model.multinomial) {
      // p(class 1) = 1 / (1 + exp(-z))
      const double v = z[0];
      const double log_p1 = -std::log1p(std::exp(-v));
      const double log_p0 = -std::log1p(std::exp(v));
      total -= y[i] == 1 ? log_p1 : log_p0;
    } else {
      double m = z[0];
      for (double v : z) m = std::max(m, v);
      double se = 0.0;
      for (double v : z) se += std::exp(v - m);
      total -= z[y[i]] - m - std::log(se);
    }
  }
  double w2 = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < d; ++j) w2 += model.weights(r, j) * model.weights(r, j);
  }
  return total / double(x.rows()) + 0.5 * l2 * w2;
}

double MeasuredSnrDb(std::span<const double> clean,
                     std::span<const double> noisy) {
  double ps = 0.0, pn = 0.0;
  for (size_t i = 0; i < clean.size(); ++i) {
    ps += clean[i] * clean[i];
    const double e = noisy[i] - clean[i];
    pn += e * e;
  }
  return 10.0 * std::log10(ps / pn);
}

}  // namespace cvd::testing
