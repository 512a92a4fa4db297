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

#ifndef CVD_CONFIG_H_
#define CVD_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cvd/dataset.h"
#include "cvd/launder.h"
#include "cvd/model.h"
#include "cvd/types.h"

namespace cvd {

// Run configuration. The file is "key = value" lines with "#" comments.
// Relative paths are resolved against the directory of the config file.
//
//   seed                 run seed (default 0)
//   dataset_tag          dataset column of the reports (default "dataset")
//   root                 "<label> <dir>", repeatable; label is "real" or
//                        "synthetic:<ARCH>"
//   utterance_pattern    regex on file stems (default "^([^_]+)")
//   balance_per_arch     clips kept per synthetic architecture, 0 = off
//   balance_allow_short  keep architectures with fewer clips (false)
//   balance_paired       pair real and synthetic renditions (false)
//   split_mode           "stratified" or "utterance"
//   allow_small_strata   permit strata of fewer than 5 clips (false)
//   work_dir             base for the defaults below (config directory)
//   manifest             <work_dir>/manifest.tsv
//   laundered_manifest   <work_dir>/manifest.laundered.tsv
//   laundered_dir        <work_dir>/laundered
//   features_dir         <work_dir>/features
//   models_dir           <work_dir>/models
//   reports_dir          <work_dir>/reports
//   embeddings           embedding exchange file for the learned family
//   families             enabled families (perceptual,spectral,learned)
//   encoder_cmd          encode template; CVD_ENCODER_CMD overrides
//   decoder_cmd          decode template; CVD_DECODER_CMD overrides
//   workers              worker threads (1)
//   envelope_cutoff_hz   amplitude envelope low-pass cutoff (10)
//   select_k             spectral features kept by selection (20)
//   decision_threshold   single-class decision threshold (0.5)
//   linear_l2_grid       comma list (1e-4,1e-3,1e-2,1e-1,1)
//   forest_trees_grid    comma list (100,300)
//   forest_depth_grid    comma list, -1 is unbounded (8,16,-1)
//   forest_min_leaf_grid comma list (1,5)
struct RunConfig {
  uint64_t seed = 0;
  std::string dataset_tag = "dataset";
  std::vector<DatasetRoot> roots;
  std::string utterance_pattern = kDefaultUtterancePattern;
  size_t balance_per_arch = 0;
  bool balance_allow_short = false;
  bool balance_paired = false;
  bool group_by_utterance = false;
  bool allow_small_strata = false;
  std::string manifest;
  std::string laundered_manifest;
  std::string laundered_dir;
  std::string features_dir;
  std::string models_dir;
  std::string reports_dir;
  std::string embeddings;
  std::vector<FeatureFamily> families = {
      FeatureFamily::kPerceptual, FeatureFamily::kSpectral, FeatureFamily::kLearned};
  EncoderConfig encoder;
  int workers = 1;
  double envelope_cutoff_hz = 10.0;
  size_t select_k = 20;
  double decision_threshold = 0.5;
  std::vector<double> linear_l2_grid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  std::vector<int> forest_trees_grid = {100, 300};
  std::vector<int> forest_depth_grid = {8, 16, -1};
  std::vector<int> forest_min_leaf_grid = {1, 5};

  std::vector<TrainConfig> Grid(ClassifierKind kind) const;
  std::string StorePath(FeatureFamily family) const;
};

// `base_dir` resolves relative paths; pass the config file's directory.
RunConfig ParseRunConfig(const std::string& text, const std::string& base_dir);
// Reads the file and applies the encoder environment overrides.
RunConfig LoadRunConfig(const std::string& path);

// Every key with its resolved value, in a fixed order.
std::string RenderRunConfig(const RunConfig& config);
// Writes RenderRunConfig next to `output` as "<output>.config".
void WriteConfigSnapshot(const RunConfig& config, const std::string& output);

}  // namespace cvd

#endif  // CVD_CONFIG_H_
