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

#ifndef CVD_SPECTRAL_H_
#define CVD_SPECTRAL_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvd/audio.h"
#include "cvd/forest.h"

namespace cvd {

inline constexpr double kFrameMs = 25.0;
inline constexpr double kHopMs = 10.0;
inline constexpr int kMelBands = 26;
inline constexpr int kMfccCount = 13;
inline constexpr int kLpcOrder = 12;
inline constexpr double kLogFloor = 1e-10;
inline constexpr double kPitchMinHz = 50.0;
inline constexpr double kPitchMaxHz = 400.0;
inline constexpr size_t kDefaultSelectK = 20;

enum class WindowType { kHamming, kHann, kRectangular };

std::vector<double> MakeWindow(WindowType type, size_t length);

// Frames at hop intervals with no tail padding. Both the raw and the
// windowed frames are kept: time-domain descriptors read the raw samples.
struct FrameMatrix {
  size_t n_frames = 0;
  size_t frame_len = 0;
  size_t hop = 0;
  WindowType window_type = WindowType::kHamming;
  std::vector<double> window;
  std::vector<double> raw;       // n_frames * frame_len, row-major
  std::vector<double> windowed;  // n_frames * frame_len, row-major

  std::span<const double> Raw(size_t i) const {
    return {raw.data() + i * frame_len, frame_len};
  }
  std::span<const double> Windowed(size_t i) const {
    return {windowed.data() + i * frame_len, frame_len};
  }
};

FrameMatrix FrameSignal(const AudioClip& clip, double frame_ms = kFrameMs,
                        double hop_ms = kHopMs,
                        WindowType window = WindowType::kHamming);

// Per-frame descriptor names, in column order of ComputeLlds.
const std::vector<std::string>& LldNames();
// Per-descriptor summary names, in the order ApplyFunctionals emits them.
const std::vector<std::string>& FunctionalNames();
inline constexpr size_t kFunctionalCount = 11;

// Triangular filters on the HTK mel scale spanning 0 Hz to Nyquist.
class MelFilterbank {
 public:
  MelFilterbank(int n_bands, size_t fft_size, double sample_rate_hz);
  // Band energies of a one-sided power spectrum.
  std::vector<double> Apply(std::span<const double> power) const;

 private:
  std::vector<std::vector<double>> weights_;  // band x bin
};

// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> Dct2(std::span<const double> x, size_t n_out);
std::vector<double> InverseDct2(std::span<const double> c, size_t n_out);

struct PitchEstimate {
  double f0_hz = 0.0;  // 0 when unvoiced or outside [50, 400] Hz
  double voicing = 0.0;
};

// Normalized autocorrelation pitch tracker on one raw frame.
PitchEstimate EstimatePitch(std::span<const double> frame,
                            double sample_rate_hz);

// n_frames x LldNames().size().
Eigen::MatrixXd ComputeLlds(const FrameMatrix& frames, double sample_rate_hz);

struct LpcResult {
  std::vector<double> coefficients;  // a_1..a_p of A(z) = 1 + sum a_k z^-k
  bool singular = false;
};

// Autocorrelation-method LPC on the Hamming-windowed signal via
// Levinson-Durbin.
LpcResult LpcCoefficients(std::span<const double> samples,
                          int order = kLpcOrder);

std::array<double, kFunctionalCount> ColumnFunctionals(
    std::span<const double> column);

// Descriptor-major concatenation of ColumnFunctionals over every column.
std::vector<double> ApplyFunctionals(const Eigen::MatrixXd& llds);

struct SpectralFeatureVector {
  std::vector<double> values;
};

// Names of the full vector: "<descriptor>.<functional>" then lpc1..lpc12.
const std::vector<std::string>& SpectralSchema();

SpectralFeatureVector ExtractSpectralFeatures(const AudioClip& clip);

struct FeatureSelection {
  std::vector<size_t> selected;     // ascending importance rank
  std::vector<double> importances;  // one per input column
  uint64_t seed = 0;
};

// Ranks columns by random-forest impurity importance on z-scored data and
// keeps the top k; ties go to the lower column index.
FeatureSelection SelectFeatures(const Eigen::MatrixXd& x,
                                std::span<const int> y, int n_classes,
                                size_t k, uint64_t seed,
                                const ForestParams& params = {},
                                int workers = 1);

}  // namespace cvd

#endif  // CVD_SPECTRAL_H_
