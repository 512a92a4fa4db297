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

#include "cvd/audio.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <numeric>

#include "cvd/error.h"
#include "cvd/text.h"

namespace cvd {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

// Stopband attenuation target of the resampling filter, in dB.
constexpr double kResampleAttenuationDb = 100.0;
// Sinc zero crossings on each side of the filter center.
constexpr int kResampleZeroCrossings = 96;
// Cutoff as a fraction of the lower of the two Nyquist frequencies.
constexpr double kResampleRolloff = 0.94;
// Above this many phases the filter is evaluated per output sample.
constexpr int64_t kMaxTabulatedPhases = 4096;

uint32_t ReadU32(std::span<const uint8_t> b, size_t off) {
  return uint32_t(b[off]) | uint32_t(b[off + 1]) << 8 |
         uint32_t(b[off + 2]) << 16 | uint32_t(b[off + 3]) << 24;
}

uint16_t ReadU16(std::span<const uint8_t> b, size_t off) {
  return uint16_t(b[off] | b[off + 1] << 8);
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(uint8_t(v));
  out.push_back(uint8_t(v >> 8));
}

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedContainer, what);
}

double DecodeSample(std::span<const uint8_t> b, size_t off, uint16_t format,
                    int bits) {
  if (format == kFormatFloat) {
    if (bits == 32) {
      uint32_t u = ReadU32(b, off);
      float f;
      std::memcpy(&f, &u, sizeof(f));
      return f;
    }
    uint64_t u = uint64_t(ReadU32(b, off)) | uint64_t(ReadU32(b, off + 4)) << 32;
    double d;
    std::memcpy(&d, &u, sizeof(d));
    return d;
  }
  switch (bits) {
    case 8:
      return (double(b[off]) - 128.0) / 128.0;
    case 16:
      return double(int16_t(ReadU16(b, off))) / 32768.0;
    case 24: {
      int32_t v = int32_t(uint32_t(b[off]) << 8 | uint32_t(b[off + 1]) << 16 |
                          uint32_t(b[off + 2]) << 24) >> 8;
      return double(v) / 8388608.0;
    }
    default:
      return double(int32_t(ReadU32(b, off))) / 2147483648.0;
  }
}

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Lowpass taps for one fractional input position. `frac` in [0, 1) is the
// offset of the output instant past input sample `base`; tap j applies to
// input sample base + j - half + 1.
class SincKernel {
 public:
  SincKernel(double cutoff, double half_width)
      : cutoff_(cutoff),
        half_width_(half_width),
        half_(static_cast<int>(std::ceil(half_width))),
        beta_(0.1102 * (kResampleAttenuationDb - 8.7)),
        i0_beta_(std::cyl_bessel_i(0.0, beta_)) {}

  int taps() const { return 2 * half_; }
  int half() const { return half_; }

  void Fill(double frac, std::vector<double>& out) const {
    out.assign(taps(), 0.0);
    double sum = 0.0;
    for (int j = 0; j < taps(); ++j) {
      const double tau = frac - double(j - half_ + 1);
      const double u = tau / half_width_;
      if (std::abs(u) >= 1.0) continue;
      const double w =
          std::cyl_bessel_i(0.0, beta_ * std::sqrt(1.0 - u * u)) / i0_beta_;
      out[j] = 2.0 * cutoff_ * Sinc(2.0 * cutoff_ * tau) * w;
      sum += out[j];
    }
    // Unit DC gain for every phase.
    for (double& v : out) v /= sum;
  }

 private:
  double cutoff_;
  double half_width_;
  int half_;
  double beta_;
  double i0_beta_;
};

}  // namespace

ClipLabel ClipLabel::Synthetic(std::string architecture) {
  if (architecture.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic label requires an architecture tag");
  }
  return {LabelKind::kSynthetic, std::move(architecture)};
}

AudioClip DecodeWav(std::span<const uint8_t> bytes) {
  if (bytes.size() < 12) Malformed("file shorter than RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    Malformed("missing RIFF/WAVE signature");
  }

  bool have_fmt = false;
  uint16_t format = 0;
  int channels = 0;
  int bits = 0;
  uint32_t rate = 0;
  uint32_t block_align = 0;
  std::optional<std::pair<size_t, size_t>> data;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const size_t size = ReadU32(bytes, pos + 4);
    const size_t body = pos + 8;
    if (size > bytes.size() - body) Malformed("chunk overruns file");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) Malformed("fmt chunk too small");
      format = ReadU16(bytes, body);
      channels = ReadU16(bytes, body + 2);
      rate = ReadU32(bytes, body + 4);
      block_align = ReadU16(bytes, body + 12);
      bits = ReadU16(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (size < 40) Malformed("extensible fmt chunk too small");
        format = ReadU16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data.emplace(body, size);
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) Malformed("no fmt chunk");
  if (!data) Malformed("no data chunk");

  if (format != kFormatPcm && format != kFormatFloat) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                "WAV format tag " + std::to_string(format));
  }
  const bool bits_ok = format == kFormatPcm
                           ? (bits == 8 || bits == 16 || bits == 24 || bits == 32)
                           : (bits == 32 || bits == 64);
  if (!bits_ok) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                std::to_string(bits) + "-bit samples");
  }
  if (channels < 1 || rate == 0) Malformed("zero channels or sample rate");
  const size_t bytes_per_sample = size_t(bits) / 8;
  if (block_align != bytes_per_sample * size_t(channels)) {
    Malformed("block alignment does not match channels and bit depth");
  }
  const auto [data_off, data_size] = *data;
  if (data_size % block_align != 0) Malformed("partial sample frame in data");

  AudioClip clip;
  clip.sample_rate_hz = static_cast<int>(rate);
  const size_t frames = data_size / block_align;
  clip.samples.resize(frames);
  for (size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      acc += DecodeSample(bytes, data_off + f * block_align + c * bytes_per_sample,
                          format, bits);
    }
    clip.samples[f] = channels == 1 ? acc : acc / channels;
  }
  return clip;
}

AudioClip ReadWavFile(const std::string& path) {
  const std::string raw = ReadFile(path);
  try {
    return DecodeWav(std::span(reinterpret_cast<const uint8_t*>(raw.data()),
                               raw.size()));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::vector<uint8_t> EncodeWav(std::span<const double> interleaved,
                               int channels, int sample_rate_hz,
                               SampleFormat format) {
  int bits = 16;
  uint16_t tag = kFormatPcm;
  switch (format) {
    case SampleFormat::kPcm8: bits = 8; break;
    case SampleFormat::kPcm16: bits = 16; break;
    case SampleFormat::kPcm24: bits = 24; break;
    case SampleFormat::kPcm32: bits = 32; break;
    case SampleFormat::kFloat32: bits = 32; tag = kFormatFloat; break;
  }
  const uint32_t block = uint32_t(channels * bits / 8);
  const uint32_t data_size = uint32_t(interleaved.size() * (bits / 8));

  std::vector<uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(out, 16);
  PutU16(out, tag);
  PutU16(out, uint16_t(channels));
  PutU32(out, uint32_t(sample_rate_hz));
  PutU32(out, uint32_t(sample_rate_hz) * block);
  PutU16(out, uint16_t(block));
  PutU16(out, uint16_t(bits));
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(out, data_size);

  for (double x : interleaved) {
    if (tag == kFormatFloat) {
      float f = static_cast<float>(x);
      uint32_t u;
      std::memcpy(&u, &f, sizeof(u));
      PutU32(out, u);
      continue;
    }
    const double scale = std::ldexp(1.0, bits - 1);
    const double q = std::clamp(std::nearbyint(x * scale), -scale, scale - 1.0);
    const int64_t v = static_cast<int64_t>(q);
    switch (bits) {
      case 8: out.push_back(uint8_t(v + 128)); break;
      case 16: PutU16(out, uint16_t(int16_t(v))); break;
      case 24:
        for (int i = 0; i < 3; ++i) out.push_back(uint8_t(uint32_t(v) >> (8 * i)));
        break;
      default: PutU32(out, uint32_t(int32_t(v))); break;
    }
  }
  return out;
}

std::vector<uint8_t> EncodeWav(const AudioClip& clip, SampleFormat format) {
  return EncodeWav(clip.samples, 1, clip.sample_rate_hz, format);
}

void WriteWavFile(const std::string& path, const AudioClip& clip,
                  SampleFormat format) {
  const auto bytes = EncodeWav(clip, format);
  WriteFile(path, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                   bytes.size()));
}

AudioClip Resample(const AudioClip& clip, int target_hz) {
  if (clip.samples.empty()) {
    throw Error(ErrorCode::kEmptyClip, "cannot resample empty clip '" +
                                           clip.clip_id + "'");
  }
  if (target_hz <= 0 || clip.sample_rate_hz <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rates must be positive");
  }
  AudioClip out = clip;
  out.sample_rate_hz = target_hz;
  if (target_hz == clip.sample_rate_hz) return out;

  const int64_t g = std::gcd<int64_t>(target_hz, clip.sample_rate_hz);
  const int64_t up = target_hz / g;                 // L
  const int64_t down = clip.sample_rate_hz / g;     // M
  const int64_t n_in = static_cast<int64_t>(clip.samples.size());
  const int64_t n_out = (2 * n_in * up + down) / (2 * down);

  // Cutoff in cycles per input sample.
  const double cutoff =
      kResampleRolloff * 0.5 * std::min(1.0, double(up) / double(down));
  const SincKernel kernel(cutoff, kResampleZeroCrossings / (2.0 * cutoff));
  const int half = kernel.half();
  const int taps = kernel.taps();

  std::vector<std::vector<double>> table;
  if (up <= kMaxTabulatedPhases) {
    table.resize(up);
    for (int64_t p = 0; p < up; ++p) kernel.Fill(double(p) / double(up), table[p]);
  }

  std::vector<double> scratch;
  out.samples.assign(n_out, 0.0);
  for (int64_t n = 0; n < n_out; ++n) {
    const int64_t pos = n * down;
    const int64_t base = pos / up;
    const int64_t phase = pos % up;
    const std::vector<double>* h;
    if (table.empty()) {
      kernel.Fill(double(phase) / double(up), scratch);
      h = &scratch;
    } else {
      h = &table[phase];
    }
    const int64_t first = base - half + 1;
    const int64_t j0 = std::max<int64_t>(0, -first);
    const int64_t j1 = std::min<int64_t>(taps, n_in - first);
    double acc = 0.0;
    for (int64_t j = j0; j < j1; ++j) acc += (*h)[j] * clip.samples[first + j];
    out.samples[n] = acc;
  }
  return out;
}

NormalizedClip NormalizeAmplitude(const AudioClip& clip) {
  if (clip.samples.empty()) {
    throw Error(ErrorCode::kEmptyClip, "cannot normalize empty clip '" +
                                           clip.clip_id + "'");
  }
  double peak = 0.0;
  for (double x : clip.samples) peak = std::max(peak, std::abs(x));
  NormalizedClip out{clip, false};
  if (peak == 0.0) {
    out.degenerate_silence = true;
    return out;
  }
  for (double& x : out.clip.samples) x /= peak;
  return out;
}

NormalizedClip Canonicalize(const AudioClip& clip) {
  if (clip.sample_rate_hz == kCanonicalSampleRate) return NormalizeAmplitude(clip);
  return NormalizeAmplitude(Resample(clip, kCanonicalSampleRate));
}

}  // namespace cvd
