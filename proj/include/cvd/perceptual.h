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

#ifndef CVD_PERCEPTUAL_H_
#define CVD_PERCEPTUAL_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cvd/audio.h"

namespace cvd {

// Pause detector parameters: a pause is any stretch covered by windows of
// kPauseWindow samples whose mean |x| falls below kPauseThreshold times the
// clip's peak |x|.
inline constexpr size_t kPauseWindow = 100;
inline constexpr double kPauseThreshold = 0.005;
inline constexpr int kEnvelopeFilterOrder = 5;
inline constexpr double kDefaultEnvelopeCutoffHz = 10.0;

// Half-open sample range [start, end).
struct PauseSegment {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  bool operator==(const PauseSegment&) const = default;
};

struct PauseStatistics {
  double ratio = 0.0;     // pause samples / clip samples
  double mean_len = 0.0;  // samples
  double std_len = 0.0;   // samples, population
  size_t count = 0;
};

struct AmplitudeFeatures {
  double mean = 0.0;
  double deriv_mean = 0.0;  // mean |first difference|
};

struct PerceptualFeatures {
  PauseStatistics pauses;
  AmplitudeFeatures amplitude;

  static constexpr size_t kDim = 6;
  std::array<double, kDim> ToArray() const;
  static std::vector<std::string> Schema();
};

struct PerceptualOptions {
  double envelope_cutoff_hz = kDefaultEnvelopeCutoffHz;
};

// Window at position i covers samples [i, i + 100). Marked windows are
// grouped into maximal runs; a run from i to j yields [i, j + 100), and
// overlapping or touching segments are merged. An all-zero clip is one pause.
std::vector<PauseSegment> DetectPauses(std::span<const double> samples);

PauseStatistics ComputePauseStatistics(std::span<const PauseSegment> pauses,
                                       size_t clip_len);

// |x| smoothed by a zero-phase 5th-order Butterworth lowpass, clamped at 0.
std::vector<double> SmoothEnvelope(const AudioClip& clip, double cutoff_hz);

AmplitudeFeatures ComputeAmplitudeFeatures(std::span<const double> envelope);

// Expects a canonical (16 kHz, peak-normalized) clip. All-zero clips are
// rejected with DegenerateSilence.
PerceptualFeatures ExtractPerceptualFeatures(
    const AudioClip& clip, const PerceptualOptions& options = {});

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double dof = 0.0;
};

// Two-sided Welch unequal-variance t-test.
TTestResult WelchTTest(std::span<const double> a, std::span<const double> b);

}  // namespace cvd

#endif  // CVD_PERCEPTUAL_H_
