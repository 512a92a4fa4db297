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

#ifndef CVD_LAUNDER_H_
#define CVD_LAUNDER_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "cvd/audio.h"
#include "cvd/dataset.h"

namespace cvd {

inline constexpr double kMinLaunderSnrDb = 10.0;
inline constexpr double kMaxLaunderSnrDb = 80.0;
inline constexpr std::array<int, 3> kLaunderBitrates = {64, 127, 196};

// Within every (label kind, split) stratum a seeded shuffle deals entries
// into None, Noise, Transcode and Both; when the stratum size is not a
// multiple of four the earlier classes get the extra entries.
DatasetManifest AssignLaundering(const DatasetManifest& manifest, uint64_t seed);

enum class ClipPolicy { kClamp, kNone };

struct NoiseResult {
  AudioClip clip;
  size_t clipped = 0;  // samples clamped back into [-1, 1]
};

// Adds zero-mean Gaussian noise with variance mean(x^2) / 10^(snr_db / 10).
NoiseResult AddNoise(const AudioClip& clip, double snr_db, uint64_t seed,
                     ClipPolicy policy = ClipPolicy::kClamp);

// Command templates with {in}, {out} and {bitrate} placeholders, run through
// /bin/sh. The encoder turns a WAV into a compressed file at {bitrate} kbps;
// the decoder turns it back into a WAV.
struct EncoderConfig {
  std::string encode_cmd;
  std::string decode_cmd;
  std::string temp_dir;  // defaults to the system temp directory
};

inline constexpr const char* kEncoderEnv = "CVD_ENCODER_CMD";
inline constexpr const char* kDecoderEnv = "CVD_DECODER_CMD";

// Replaces the commands with CVD_ENCODER_CMD / CVD_DECODER_CMD when set.
EncoderConfig ApplyEncoderEnv(EncoderConfig config);

// Encodes and decodes through the configured commands, resamples to the
// input rate, aligns the result to the input by cross-correlation, trims or
// pads to the input length and peak-normalizes.
AudioClip Transcode(const AudioClip& clip, int bitrate_kbps,
                    const EncoderConfig& encoder);

// Lag (in samples) of `decoded` relative to `reference` within +-max_lag
// maximizing the cross-correlation; smallest |lag| wins ties.
long AlignmentLag(std::span<const double> reference,
                  std::span<const double> decoded, long max_lag);

// None: identity. Noise: AddNoise. Transcode: Transcode. Both: Transcode
// followed by AddNoise.
NoiseResult LaunderClip(const AudioClip& clip, const LaunderingSpec& spec,
                        uint64_t seed, const EncoderConfig& encoder,
                        ClipPolicy policy = ClipPolicy::kClamp);

// Noise seed of one clip within a run.
uint64_t LaunderSeed(uint64_t run_seed, std::string_view clip_id);

}  // namespace cvd

#endif  // CVD_LAUNDER_H_
