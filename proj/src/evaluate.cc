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

#include "cvd/evaluate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "cvd/error.h"
#include "cvd/text.h"

namespace cvd {

RocCurve ComputeRoc(std::span<const double> scores,
                    std::span<const LabelKind> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels differ in length");
  }
  std::vector<std::pair<double, LabelKind>> items;
  size_t n_syn = 0, n_real = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    items.emplace_back(scores[i], labels[i]);
    (labels[i] == LabelKind::kSynthetic ? n_syn : n_real)++;
  }
  if (n_syn == 0 || n_real == 0) {
    throw Error(ErrorCode::kSingleClassLabels, "ROC needs both classes");
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  const double inf = std::numeric_limits<double>::infinity();
  RocCurve roc;
  roc.points.push_back({inf, 1.0, 0.0});
  // Lowering the threshold to a score value flips every clip with that score
  // to synthetic.
  size_t syn_above = 0, real_above = 0;
  for (size_t i = 0; i < items.size();) {
    const double t = items[i].first;
    for (; i < items.size() && items[i].first == t; ++i) {
      (items[i].second == LabelKind::kSynthetic ? syn_above : real_above)++;
    }
    roc.points.push_back({t, double(n_syn - syn_above) / double(n_syn),
                          double(real_above) / double(n_real)});
  }
  roc.points.push_back({-inf, 0.0, 1.0});
  return roc;
}

EerResult ComputeEer(const RocCurve& roc) {
  const auto& p = roc.points;
  for (size_t i = 0; i < p.size(); ++i) {
    const double d = p[i].far - p[i].frr;
    if (d == 0.0) return {100.0 * p[i].far, p[i].threshold};
    if (i + 1 < p.size()) {
      const double d_next = p[i + 1].far - p[i + 1].frr;
      if (d > 0.0 && d_next < 0.0) {
        const double alpha = d / (d - d_next);
        const double eer = p[i].far + alpha * (p[i + 1].far - p[i].far);
        double threshold;
        if (std::isfinite(p[i].threshold) && std::isfinite(p[i + 1].threshold)) {
          threshold = p[i].threshold + alpha * (p[i + 1].threshold - p[i].threshold);
        } else {
          threshold = std::isfinite(p[i].threshold) ? p[i].threshold
                                                    : p[i + 1].threshold;
        }
        return {100.0 * eer, threshold};
      }
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "ROC curve has no FAR/FRR crossing");
}

EerResult ComputeEer(std::span<const double> scores,
                     std::span<const LabelKind> labels) {
  return ComputeEer(ComputeRoc(scores, labels));
}

ClassAccuracy ClassAccuracies(const std::vector<std::vector<double>>& proba,
                              std::span<const int> labels, TaskKind task,
                              double threshold) {
  if (proba.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "predictions and labels differ in length");
  }
  size_t n_classes = 2;
  for (const auto& p : proba) n_classes = std::max(n_classes, p.size());
  for (int y : labels) n_classes = std::max(n_classes, size_t(y) + 1);

  ClassAccuracy acc;
  acc.confusion.assign(n_classes, std::vector<int>(n_classes, 0));
  size_t syn_total = 0, syn_ok = 0, real_total = 0, real_ok = 0;
  for (size_t i = 0; i < proba.size(); ++i) {
    int predicted;
    if (task == TaskKind::kSingleClass) {
      predicted = proba[i].at(1) >= threshold ? 1 : 0;
    } else {
      predicted = int(std::max_element(proba[i].begin(), proba[i].end()) -
                      proba[i].begin());
    }
    const int truth = labels[i];
    acc.confusion[truth][predicted]++;
    if (truth == 0) {
      ++real_total;
      real_ok += predicted == 0;
    } else {
      ++syn_total;
      syn_ok += predicted == truth;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  acc.synthetic_pct = syn_total ? 100.0 * double(syn_ok) / double(syn_total) : nan;
  acc.real_pct = real_total ? 100.0 * double(real_ok) / double(real_total) : nan;
  return acc;
}

namespace {

constexpr FeatureFamily kFamilyColumns[] = {
    FeatureFamily::kLearned, FeatureFamily::kSpectral, FeatureFamily::kPerceptual};

std::string Cell(double v) {
  return std::isnan(v) ? std::string("nan") : fmt::format("{:.1f}", v);
}

void CheckCsvField(const std::string& field) {
  if (field.find_first_of(",\n\r") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "report field '" + field + "' contains a separator");
  }
}

std::string CsvNumber(double v) {
  return std::isnan(v) ? std::string("nan") : FormatDouble(v);
}

double ParseCsvNumber(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return ParseDouble(s, "report csv");
}

}  // namespace

std::string RenderReportTable(const std::vector<EvalReport>& reports) {
  using Key = std::tuple<std::string, ClassifierKind, TaskKind>;
  std::vector<Key> order;
  std::map<Key, std::map<FeatureFamily, const EvalReport*>> rows;
  for (const auto& r : reports) {
    Key key{r.dataset, r.classifier, r.task};
    if (!rows.count(key)) order.push_back(key);
    rows[key][r.family] = &r;
  }

  std::string out;
  out += fmt::format("{:<10} {:<10} | {:^32} | {:^32} | {:^32}\n", "Dataset",
                     "Model", "Synthetic Accuracy (%)", "Real Accuracy (%)",
                     "EER (%)");
  std::string fams;
  for (auto f : kFamilyColumns) fams += fmt::format("{:>10} ", ToString(f));
  out += fmt::format("{:<10} {:<10} | {} | {} | {}\n", "", "", fams, fams, fams);

  for (const auto& key : order) {
    const auto& [dataset, classifier, task] = key;
    const auto& cells = rows[key];
    std::string syn, real, eer;
    for (auto f : kFamilyColumns) {
      auto it = cells.find(f);
      if (it == cells.end()) {
        syn += fmt::format("{:>10} ", "");
        real += fmt::format("{:>10} ", "");
        eer += fmt::format("{:>10} ", task == TaskKind::kMultiClass ? "-" : "");
        continue;
      }
      const EvalReport& r = *it->second;
      syn += fmt::format("{:>10} ", Cell(r.synthetic_acc));
      real += fmt::format("{:>10} ", Cell(r.real_acc));
      eer += fmt::format("{:>10} ", (task == TaskKind::kMultiClass || !r.eer)
                                        ? std::string("-")
                                        : Cell(*r.eer));
    }
    const std::string model =
        fmt::format("{} {}", ClassifierTag(classifier), ToString(task));
    out += fmt::format("{:<10} {:<10} | {} | {} | {}\n", dataset, model, syn,
                       real, eer);
  }
  return out;
}

std::string RenderReportCsv(const std::vector<EvalReport>& reports) {
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const auto& r : reports) {
    CheckCsvField(r.dataset);
    CheckCsvField(r.model);
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.dataset, r.model,
                       ClassifierTag(r.classifier), ToString(r.task),
                       ToString(r.family), CsvNumber(r.synthetic_acc),
                       CsvNumber(r.real_acc),
                       (r.task == TaskKind::kMultiClass || !r.eer)
                           ? std::string("-")
                           : CsvNumber(*r.eer));
  }
  return out;
}

std::vector<EvalReport> ParseReportCsv(const std::string& text) {
  std::vector<EvalReport> out;
  bool header_seen = false;
  for (auto line : Split(text, '\n')) {
    line = Trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kReportCsvHeader) {
        throw Error(ErrorCode::kParseError, "unexpected report CSV header");
      }
      header_seen = true;
      continue;
    }
    const auto f = Split(line, ',');
    if (f.size() != 8) {
      throw Error(ErrorCode::kParseError,
                  "report CSV row needs 8 fields: " + std::string(line));
    }
    EvalReport r;
    r.dataset = std::string(f[0]);
    r.model = std::string(f[1]);
    if (f[2] == "L") {
      r.classifier = ClassifierKind::kLinear;
    } else if (f[2] == "NL") {
      r.classifier = ClassifierKind::kForest;
    } else {
      throw Error(ErrorCode::kParseError, "bad classifier tag " + std::string(f[2]));
    }
    r.task = ParseTaskKind(f[3]);
    r.family = ParseFeatureFamily(f[4]);
    r.synthetic_acc = ParseCsvNumber(f[5]);
    r.real_acc = ParseCsvNumber(f[6]);
    if (f[7] != "-") r.eer = ParseCsvNumber(f[7]);
    out.push_back(std::move(r));
  }
  if (!header_seen) throw Error(ErrorCode::kParseError, "empty report CSV");
  return out;
}

}  // namespace cvd
