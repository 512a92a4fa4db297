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

#ifndef CVD_DATASET_H_
#define CVD_DATASET_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cvd/audio.h"

namespace cvd {

enum class DataSplit { kUnassigned, kTrain, kVal, kTest };

std::string_view ToString(DataSplit split);
DataSplit ParseSplit(std::string_view text);

enum class LaunderKind { kNone, kNoise, kTranscode, kBoth };

struct LaunderingSpec {
  LaunderKind kind = LaunderKind::kNone;
  double snr_db = 0.0;   // Noise and Both
  int bitrate_kbps = 0;  // Transcode and Both

  static LaunderingSpec None() { return {}; }
  static LaunderingSpec Noise(double snr_db) {
    return {LaunderKind::kNoise, snr_db, 0};
  }
  static LaunderingSpec Transcode(int kbps) {
    return {LaunderKind::kTranscode, 0.0, kbps};
  }
  static LaunderingSpec Both(double snr_db, int kbps) {
    return {LaunderKind::kBoth, snr_db, kbps};
  }

  bool operator==(const LaunderingSpec&) const = default;
};

// none | noise:<snr_db> | transcode:<kbps> | both:<snr_db>:<kbps>
std::string FormatLaundering(const LaunderingSpec& spec);
LaunderingSpec ParseLaundering(std::string_view text);

struct ManifestEntry {
  std::string clip_id;
  std::string path;
  ClipLabel label;
  std::string utterance_id;
  DataSplit split = DataSplit::kUnassigned;
  LaunderingSpec laundering;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  uint64_t seed = 0;
  std::vector<std::string> provenance;

  std::vector<std::string> ClipIds() const;
  bool operator==(const DatasetManifest&) const = default;
};

struct DatasetRoot {
  std::string directory;
  ClipLabel label;
};

inline constexpr const char* kDefaultUtterancePattern = "^([^_]+)";

// Scans every root recursively for *.wav files. The clip id is the path
// relative to the deepest directory shared by all roots, without extension.
// The utterance id is the first capture group of `utterance_pattern` on the
// file stem (the whole match when the pattern has no group, the stem when it
// does not match). Entries are sorted by path.
DatasetManifest BuildManifest(const std::vector<DatasetRoot>& roots,
                              const std::string& utterance_pattern =
                                  kDefaultUtterancePattern);

// Keeps a seeded uniform subsample of `target_per_arch` clips for every
// synthetic architecture. Real clips are untouched.
DatasetManifest BalanceArchitectures(const DatasetManifest& manifest,
                                     size_t target_per_arch, uint64_t seed,
                                     bool allow_short = false);

// Drops utterances without both a real and a synthetic rendition and
// subsamples the majority side of every remaining utterance.
DatasetManifest BalancePairedUtterances(const DatasetManifest& manifest,
                                        uint64_t seed);

struct SplitOptions {
  bool group_by_utterance = false;
  bool allow_small_strata = false;
};

// 60/20/20 per (label kind, architecture) stratum after a seeded shuffle.
// Counts are rounded on cumulative boundaries across the strata of each
// label, so every label is within one clip of the target proportions and
// every stratum within two. Group mode assigns whole utterances.
DatasetManifest SplitDataset(const DatasetManifest& manifest, uint64_t seed,
                             const SplitOptions& options = {});

std::string SerializeManifest(const DatasetManifest& manifest);
DatasetManifest ParseManifest(const std::string& text);
void SaveManifest(const std::string& path, const DatasetManifest& manifest);
DatasetManifest LoadManifest(const std::string& path);

}  // namespace cvd

#endif  // CVD_DATASET_H_
