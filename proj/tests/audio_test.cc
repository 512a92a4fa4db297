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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include <gtest/gtest.h>

#include "cvd/audio.h"
#include "cvd/random.h"
#include "support/test_util.h"

namespace cvd {
namespace {

using testing::DftMagnitude;
using testing::MakeClip;
using testing::Sine;

// Minimal RIFF writer, independent of EncodeWav.
struct WavBuilder {
  uint16_t format = 1;
  uint16_t channels = 1;
  uint32_t rate = 16000;
  uint16_t bits = 16;
  std::vector<uint8_t> payload;

  void Le(std::vector<uint8_t>& out, uint64_t v, int n) const {
    for (int i = 0; i < n; ++i) out.push_back(uint8_t(v >> (8 * i)));
  }
  void Tag(std::vector<uint8_t>& out, const char* t) const {
    out.insert(out.end(), t, t + 4);
  }
  void Add16(int16_t v) { Le(payload, uint16_t(v), 2); }

  std::vector<uint8_t> Bytes() const {
    std::vector<uint8_t> out;
    Tag(out, "RIFF");
    Le(out, 36 + payload.size(), 4);
    Tag(out, "WAVE");
    Tag(out, "fmt ");
    Le(out, 16, 4);
    Le(out, format, 2);
    Le(out, channels, 2);
    Le(out, rate, 4);
    Le(out, rate * channels * bits / 8, 4);
    Le(out, channels * bits / 8, 2);
    Le(out, bits, 2);
    Tag(out, "data");
    Le(out, payload.size(), 4);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
  }
};

TEST(DecodeWavTest, Pcm16FullScaleMapping) {
  WavBuilder w;
  w.Add16(0);
  w.Add16(16384);
  w.Add16(-32768);
  const auto bytes = w.Bytes();
  const AudioClip c = DecodeWav(bytes);
  EXPECT_EQ(c.sample_rate_hz, 16000);
  EXPECT_EQ(c.samples, (std::vector<double>{0.0, 0.5, -1.0}));
}

TEST(DecodeWavTest, StereoIsAveraged) {
  WavBuilder w;
  w.channels = 2;
  w.format = 3;
  w.bits = 32;
  const float l = 1.0f, r = 0.0f;
  uint32_t u;
  std::memcpy(&u, &l, 4);
  w.Le(w.payload, u, 4);
  std::memcpy(&u, &r, 4);
  w.Le(w.payload, u, 4);
  const AudioClip c = DecodeWav(w.Bytes());
  EXPECT_EQ(c.samples, (std::vector<double>{0.5}));
}

TEST(DecodeWavTest, EightAndTwentyFourBit) {
  WavBuilder w8;
  w8.bits = 8;
  w8.payload = {128, 192, 0};
  EXPECT_EQ(DecodeWav(w8.Bytes()).samples, (std::vector<double>{0.0, 0.5, -1.0}));

  WavBuilder w24;
  w24.bits = 24;
  w24.Le(w24.payload, 0x400000, 3);  // +0.5
  w24.Le(w24.payload, 0x800000, 3);  // -1.0
  EXPECT_EQ(DecodeWav(w24.Bytes()).samples, (std::vector<double>{0.5, -1.0}));
}

TEST(DecodeWavTest, RejectsBrokenContainers) {
  WavBuilder w;
  w.Add16(1);
  auto bytes = w.Bytes();
  auto truncated = bytes;
  truncated.resize(bytes.size() - 1);
  EXPECT_CVD_ERROR(DecodeWav(truncated), ErrorCode::kMalformedContainer);
  auto bad_sig = bytes;
  bad_sig[0] = 'X';
  EXPECT_CVD_ERROR(DecodeWav(bad_sig), ErrorCode::kMalformedContainer);
  EXPECT_CVD_ERROR(DecodeWav(std::vector<uint8_t>(5, 0)),
                   ErrorCode::kMalformedContainer);
  WavBuilder odd;
  odd.payload = {1, 2, 3};
  EXPECT_CVD_ERROR(DecodeWav(odd.Bytes()), ErrorCode::kMalformedContainer);
}

TEST(DecodeWavTest, RejectsCompressedFormats) {
  WavBuilder w;
  w.format = 2;  // MS ADPCM
  w.bits = 4;
  w.payload = {0, 0};
  EXPECT_CVD_ERROR(DecodeWav(w.Bytes()), ErrorCode::kUnsupportedEncoding);
}

TEST(DecodeWavTest, SineRoundTripWithinQuantizationStep) {
  const auto x = Sine(440.0, 16000.0, 4096, 0.9);
  const AudioClip back = DecodeWav(EncodeWav(MakeClip(x), SampleFormat::kPcm16));
  ASSERT_EQ(back.samples.size(), x.size());
  double worst = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(back.samples[i] - x[i]));
  }
  EXPECT_LT(worst, 1.0 / 32768.0);
}

TEST(DecodeWavTest, EveryFormatRoundTrips) {
  Rng rng(7);
  std::vector<double> x(1000);
  for (auto& v : x) v = rng.Uniform(-1.0, 1.0);
  const std::pair<SampleFormat, double> cases[] = {
      {SampleFormat::kPcm8, 1.0 / 128},
      {SampleFormat::kPcm16, 1.0 / 32768},
      {SampleFormat::kPcm24, 1.0 / 8388608},
      {SampleFormat::kPcm32, 1.0 / 2147483648.0},
      {SampleFormat::kFloat32, 1e-7}};
  for (const auto& [fmt, step] : cases) {
    const AudioClip back = DecodeWav(EncodeWav(MakeClip(x), fmt));
    for (size_t i = 0; i < x.size(); ++i) {
      ASSERT_LE(std::abs(back.samples[i] - x[i]), step) << int(fmt) << " " << i;
    }
  }
}

TEST(DecodeWavTest, FileRoundTrip) {
  testing::ScratchDir dir;
  const AudioClip c = MakeClip({0.25, -0.5, 0.0}, 8000);
  WriteWavFile(dir / "a.wav", c, SampleFormat::kFloat32);
  const AudioClip back = ReadWavFile(dir / "a.wav");
  EXPECT_EQ(back.samples, c.samples);
  EXPECT_EQ(back.sample_rate_hz, 8000);
}

TEST(ResampleTest, SameRateIsIdentity) {
  Rng rng(1);
  std::vector<double> x(500);
  for (auto& v : x) v = rng.Normal();
  EXPECT_EQ(Resample(MakeClip(x), 16000).samples, x);
}

TEST(ResampleTest, OutputLengthFollowsRatio) {
  for (size_t n : {1u, 7u, 100u, 1001u, 8000u}) {
    const AudioClip up = Resample(MakeClip(std::vector<double>(n, 0.1), 8000), 16000);
    EXPECT_NEAR(double(up.samples.size()), 2.0 * double(n), 1.0);
    EXPECT_EQ(up.sample_rate_hz, 16000);
    const AudioClip odd = Resample(MakeClip(std::vector<double>(n, 0.1), 44100), 16000);
    EXPECT_NEAR(double(odd.samples.size()), double(n) * 16000.0 / 44100.0, 1.0);
  }
  EXPECT_CVD_ERROR(Resample(MakeClip({}, 8000), 16000), ErrorCode::kEmptyClip);
}

TEST(ResampleTest, DownsampledSineKeepsPeakAndLevel) {
  const size_t n_out = 4096;
  for (double f : {1000.0, 250.0, 3000.0, 6000.0}) {
    // Whole number of cycles over the analysed block, no leakage.
    const double bin_hz = 16000.0 / double(n_out);
    const double freq = std::round(f / bin_hz) * bin_hz;
    const auto x = Sine(freq, 48000.0, 3 * (n_out + 400));
    const AudioClip y = Resample(MakeClip(x, 48000), 16000);
    std::vector<double> block(y.samples.begin() + 200, y.samples.begin() + 200 + n_out);
    size_t best = 0;
    double best_mag = 0.0;
    for (size_t k = 1; k < n_out / 2; ++k) {
      const double m = DftMagnitude(block, k);
      if (m > best_mag) {
        best_mag = m;
        best = k;
      }
    }
    EXPECT_NEAR(double(best) * bin_hz, freq, bin_hz) << f;
    const double amp = 2.0 * DftMagnitude(block, size_t(std::lround(freq / bin_hz))) /
                       double(n_out);
    EXPECT_LT(std::abs(20.0 * std::log10(amp)), 0.1) << f;
  }
}

TEST(ResampleTest, AliasesAreSuppressed) {
  // 12 kHz at 48 kHz lies above the 8 kHz output Nyquist.
  const auto x = Sine(12000.0, 48000.0, 48000);
  const AudioClip y = Resample(MakeClip(x, 48000), 16000);
  double peak = 0.0;
  for (size_t i = 500; i + 500 < y.samples.size(); ++i) {
    peak = std::max(peak, std::abs(y.samples[i]));
  }
  EXPECT_LT(peak, 1e-3);
}

TEST(ResampleTest, UpDownRoundTripOfBandLimitedSignal) {
  const size_t n = 8000;
  std::vector<double> x(n, 0.0);
  Rng rng(11);
  for (int k = 0; k < 12; ++k) {
    const double f = rng.Uniform(50.0, 6500.0);
    const auto s = Sine(f, 16000.0, n, rng.Uniform(0.02, 0.08), rng.Uniform(0, 6.28));
    for (size_t i = 0; i < n; ++i) x[i] += s[i];
  }
  for (size_t i = 0; i < n; ++i) {
    x[i] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) / double(n - 1));
  }
  const AudioClip up = Resample(MakeClip(x), 48000);
  const AudioClip back = Resample(up, 16000);
  ASSERT_EQ(back.samples.size(), n);
  double worst = 0.0;
  for (size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(back.samples[i] - x[i]));
  EXPECT_LT(worst, 1e-3);
}

TEST(NormalizeTest, PeakScaling) {
  const auto r = NormalizeAmplitude(MakeClip({0.5, -0.25}));
  EXPECT_EQ(r.clip.samples, (std::vector<double>{1.0, -0.5}));
  EXPECT_FALSE(r.degenerate_silence);
  EXPECT_EQ(NormalizeAmplitude(MakeClip({1.0, -1.0})).clip.samples,
            (std::vector<double>{1.0, -1.0}));
}

TEST(NormalizeTest, SilenceIsFlaggedNotRejected) {
  const auto r = NormalizeAmplitude(MakeClip(std::vector<double>(100, 0.0)));
  EXPECT_TRUE(r.degenerate_silence);
  EXPECT_EQ(r.clip.samples, std::vector<double>(100, 0.0));
}

TEST(NormalizeTest, Idempotent) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(200);
    for (auto& v : x) v = rng.Normal() * rng.Uniform(0.01, 10.0);
    const auto once = NormalizeAmplitude(MakeClip(x)).clip;
    const auto twice = NormalizeAmplitude(once).clip;
    EXPECT_EQ(once.samples, twice.samples);
    double peak = 0.0;
    for (double v : once.samples) peak = std::max(peak, std::abs(v));
    EXPECT_EQ(peak, 1.0);
  }
}

TEST(CanonicalizeTest, ResamplesThenNormalizes) {
  const auto x = Sine(440.0, 8000.0, 8000, 0.3);
  const auto r = Canonicalize(MakeClip(x, 8000));
  EXPECT_EQ(r.clip.sample_rate_hz, kCanonicalSampleRate);
  EXPECT_EQ(r.clip.samples.size(), 16000u);
  double peak = 0.0;
  for (double v : r.clip.samples) peak = std::max(peak, std::abs(v));
  EXPECT_EQ(peak, 1.0);
}

TEST(ClipLabelTest, SyntheticNeedsArchitecture) {
  EXPECT_CVD_ERROR(ClipLabel::Synthetic(""), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ClipLabel::Synthetic("EL").architecture, "EL");
  EXPECT_TRUE(ClipLabel::Real().architecture.empty());
}

}  // namespace
}  // namespace cvd
