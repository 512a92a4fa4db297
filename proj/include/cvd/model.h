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

#ifndef CVD_MODEL_H_
#define CVD_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cvd/audio.h"
#include "cvd/forest.h"
#include "cvd/logistic.h"
#include "cvd/standardize.h"
#include "cvd/types.h"

namespace cvd {

struct TrainConfig {
  ClassifierKind kind = ClassifierKind::kLinear;
  LogisticParams logistic;
  ForestParams forest;

  std::string Describe() const;
};

// Default validation grids: l2 over five decades for the linear model; tree
// count, depth and leaf size for the forest.
std::vector<TrainConfig> DefaultGrid(ClassifierKind kind);

// Class 0 is always "real". Single-class adds "synthetic"; multi-class adds
// the sorted architecture tags present in `labels`.
std::vector<std::string> ClassNames(TaskKind task,
                                    std::span<const ClipLabel> labels);
int ClassIndex(std::span<const std::string> classes, TaskKind task,
               const ClipLabel& label);

struct TrainedModel {
  FeatureFamily family = FeatureFamily::kPerceptual;
  TaskKind task = TaskKind::kSingleClass;
  std::vector<std::string> classes;
  uint64_t seed = 0;
  size_t input_dim = 0;
  std::vector<size_t> selected;  // empty: every input column is used
  Standardizer standardizer;     // over the selected columns
  std::string train_digest;      // hash of the sorted training clip ids
  TrainConfig config;
  std::variant<LogisticModel, Forest> classifier;

  ClassifierKind kind() const { return config.kind; }
};

// Selection, then standardization, then the classifier.
std::vector<double> PredictProba(const TrainedModel& model,
                                 std::span<const double> raw_features);

// Reloading reproduces predictions bit for bit. Parse verifies the stored
// digest of the standardization statistics.
std::string SerializeModel(const TrainedModel& model);
TrainedModel ParseModel(const std::string& text);
void SaveModel(const std::string& path, const TrainedModel& model);
TrainedModel LoadModel(const std::string& path);

std::string StandardizerDigest(const Standardizer& s);
std::string ClipSetDigest(std::vector<std::string> clip_ids);

struct LabeledData {
  std::vector<std::string> clip_ids;
  Eigen::MatrixXd x;
  std::vector<int> y;
};

struct GridOutcome {
  TrainConfig config;
  bool ok = false;
  double score = 0.0;  // validation EER % (single) or macro accuracy % (multi)
  std::string message;
};

struct TuneResult {
  size_t best_index = 0;
  std::vector<GridOutcome> outcomes;
  TrainedModel model;
};

struct TuneOptions {
  size_t select_k = 20;  // spectral family only
  int workers = 1;
  double threshold = 0.5;
};

// Fits every grid point on `train`, scores it on `val` (lowest EER for the
// single-class task, highest macro accuracy for multi-class; earlier grid
// entries win ties) and returns the winner, which is trained on `train`
// only. Failing grid points are recorded and skipped.
TuneResult TuneHyperparameters(const LabeledData& train, const LabeledData& val,
                               FeatureFamily family, TaskKind task,
                               std::vector<std::string> classes,
                               std::span<const TrainConfig> grid, uint64_t seed,
                               const TuneOptions& options = {});

// Validation score of one trained model, as used by the tuner.
double ValidationScore(const TrainedModel& model, const LabeledData& val,
                       double threshold = 0.5);

}  // namespace cvd

#endif  // CVD_MODEL_H_
