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

#ifndef CVD_EVALUATE_H_
#define CVD_EVALUATE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvd/audio.h"
#include "cvd/types.h"

namespace cvd {

// A clip is called synthetic when its score is >= threshold.
//   FAR: fraction of synthetic clips called real.
//   FRR: fraction of real clips called synthetic.
// This is the orientation used throughout; many speaker-verification tools
// use the opposite one.
struct RocPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

// Sorted by threshold descending: +inf (FAR 1, FRR 0), each distinct score,
// then -inf (FAR 0, FRR 1). FAR is non-increasing and FRR non-decreasing
// along the curve.
struct RocCurve {
  std::vector<RocPoint> points;
};

RocCurve ComputeRoc(std::span<const double> synthetic_scores,
                    std::span<const LabelKind> labels);

struct EerResult {
  double eer_percent = 0.0;
  double threshold = 0.0;
};

// Linear interpolation between the two curve points straddling FAR == FRR.
EerResult ComputeEer(const RocCurve& roc);

// Convenience: ComputeEer(ComputeRoc(...)).
EerResult ComputeEer(std::span<const double> synthetic_scores,
                     std::span<const LabelKind> labels);

struct ClassAccuracy {
  double synthetic_pct = 0.0;
  double real_pct = 0.0;
  // confusion[true][predicted], class 0 is real.
  std::vector<std::vector<int>> confusion;
};

// Single-class: synthetic iff proba[1] >= threshold. Multi-class: argmax,
// and a synthetic clip only counts as correct when its architecture is.
ClassAccuracy ClassAccuracies(const std::vector<std::vector<double>>& proba,
                              std::span<const int> labels, TaskKind task,
                              double threshold = 0.5);

struct EvalReport {
  std::string dataset;
  std::string model;
  ClassifierKind classifier = ClassifierKind::kLinear;
  TaskKind task = TaskKind::kSingleClass;
  FeatureFamily family = FeatureFamily::kPerceptual;
  double synthetic_acc = 0.0;   // %
  double real_acc = 0.0;        // %
  std::optional<double> eer;    // %, single-class only
  std::vector<std::vector<int>> confusion;
};

inline constexpr const char* kReportCsvHeader =
    "dataset,model,classifier,task,family,synthetic_acc,real_acc,eer";

// Rows keyed by (dataset, classifier, task); columns are the three families
// under each metric. Multi-class EER cells are "-".
std::string RenderReportTable(const std::vector<EvalReport>& reports);
std::string RenderReportCsv(const std::vector<EvalReport>& reports);
// Confusion matrices are not part of the CSV and come back empty.
std::vector<EvalReport> ParseReportCsv(const std::string& text);

}  // namespace cvd

#endif  // CVD_EVALUATE_H_
