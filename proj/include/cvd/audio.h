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

#ifndef CVD_AUDIO_H_
#define CVD_AUDIO_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cvd {

inline constexpr int kCanonicalSampleRate = 16000;

enum class LabelKind { kReal, kSynthetic };

// Architecture is present iff kind == kSynthetic (EL, UD, a WaveFake
// vocoder name, ...).
struct ClipLabel {
  LabelKind kind = LabelKind::kReal;
  std::string architecture;

  static ClipLabel Real() { return {LabelKind::kReal, {}}; }
  static ClipLabel Synthetic(std::string architecture);

  bool operator==(const ClipLabel&) const = default;
};

struct AudioClip {
  std::string clip_id;
  std::vector<double> samples;
  int sample_rate_hz = kCanonicalSampleRate;
  std::optional<ClipLabel> label;
};

// Result of peak normalization. An all-zero clip passes through unchanged and
// is flagged rather than rejected.
struct NormalizedClip {
  AudioClip clip;
  bool degenerate_silence = false;
};

enum class SampleFormat { kPcm8, kPcm16, kPcm24, kPcm32, kFloat32 };

// Decodes a RIFF/WAVE PCM container. Multichannel input is averaged to mono
// and integer samples are scaled by the nominal full scale of the bit depth.
AudioClip DecodeWav(std::span<const uint8_t> bytes);
AudioClip ReadWavFile(const std::string& path);

// Interleaved frames, `channels` per frame. Integer formats round to the
// nearest code and saturate.
std::vector<uint8_t> EncodeWav(std::span<const double> interleaved,
                               int channels, int sample_rate_hz,
                               SampleFormat format);
std::vector<uint8_t> EncodeWav(const AudioClip& clip, SampleFormat format);
void WriteWavFile(const std::string& path, const AudioClip& clip,
                  SampleFormat format);

// Band-limited rational resampling with a Kaiser-windowed sinc polyphase
// filter. Output length is round(len * target / source).
AudioClip Resample(const AudioClip& clip, int target_hz);

NormalizedClip NormalizeAmplitude(const AudioClip& clip);

// Resample to 16 kHz, then peak-normalize.
NormalizedClip Canonicalize(const AudioClip& clip);

}  // namespace cvd

#endif  // CVD_AUDIO_H_
