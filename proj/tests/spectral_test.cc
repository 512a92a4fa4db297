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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cvd/spectral.h"
#include "support/fixtures.h"
#include "support/test_util.h"

namespace cvd {
namespace {

using testing::MakeClip;

size_t LldColumn(const std::string& name) {
  const auto& names = LldNames();
  return size_t(std::find(names.begin(), names.end(), name) - names.begin());
}

TEST(FrameSignalTest, FrameCounts) {
  EXPECT_EQ(FrameSignal(MakeClip(std::vector<double>(16000, 0.1))).n_frames, 98u);
  const auto one = FrameSignal(MakeClip(std::vector<double>(400, 0.1)));
  EXPECT_EQ(one.n_frames, 1u);
  EXPECT_EQ(one.frame_len, 400u);
  EXPECT_EQ(one.hop, 160u);
  EXPECT_EQ(FrameSignal(MakeClip(std::vector<double>(559, 0.1))).n_frames, 1u);
  EXPECT_EQ(FrameSignal(MakeClip(std::vector<double>(560, 0.1))).n_frames, 2u);
  EXPECT_CVD_ERROR(FrameSignal(MakeClip(std::vector<double>(399, 0.1))),
                   ErrorCode::kClipTooShort);
}

TEST(FrameSignalTest, ConstantSignalFramesAreScaledWindow) {
  const auto fm = FrameSignal(MakeClip(std::vector<double>(2000, 0.7)));
  for (size_t f = 0; f < fm.n_frames; ++f) {
    const auto w = fm.Windowed(f);
    for (size_t j = 0; j < fm.frame_len; ++j) {
      const double hamming =
          0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * j / (fm.frame_len - 1));
      EXPECT_NEAR(w[j], 0.7 * hamming, 1e-15);
      EXPECT_EQ(fm.Raw(f)[j], 0.7);
    }
  }
}

TEST(WindowTest, Shapes) {
  const auto hann = MakeWindow(WindowType::kHann, 9);
  EXPECT_NEAR(hann[0], 0.0, 1e-15);
  EXPECT_NEAR(hann[4], 1.0, 1e-15);
  const auto ham = MakeWindow(WindowType::kHamming, 9);
  EXPECT_NEAR(ham[0], 0.08, 1e-15);
  EXPECT_NEAR(ham[8], 0.08, 1e-15);
  for (double v : MakeWindow(WindowType::kRectangular, 5)) EXPECT_EQ(v, 1.0);
}

TEST(LldTest, ToneCentroidAndPitch) {
  const auto clip = MakeClip(testing::Sine(1000.0, 16000.0, 16000, 0.8));
  const auto llds = ComputeLlds(FrameSignal(clip), 16000.0);
  ASSERT_EQ(size_t(llds.cols()), LldNames().size());
  const double bin_hz = 16000.0 / 512.0;
  for (int f = 0; f < llds.rows(); ++f) {
    EXPECT_NEAR(llds(f, LldColumn("centroid")), 1000.0, bin_hz);
    EXPECT_EQ(llds(f, LldColumn("f0")), 0.0);
  }
}

TEST(LldTest, TwoHundredHertzPitch) {
  const auto clip = MakeClip(testing::Sine(200.0, 16000.0, 16000, 0.8));
  const auto llds = ComputeLlds(FrameSignal(clip), 16000.0);
  for (int f = 0; f < llds.rows(); ++f) {
    EXPECT_NEAR(llds(f, LldColumn("f0")), 200.0, 5.0);
    EXPECT_GT(llds(f, LldColumn("voicing")), 0.9);
  }
  const auto est = EstimatePitch(testing::Sine(200.0, 16000.0, 400), 16000.0);
  EXPECT_NEAR(est.f0_hz, 200.0, 5.0);
}

TEST(LldTest, PitchTracksAcrossRange) {
  for (double f0 : {80.0, 120.0, 250.0, 380.0}) {
    const auto est = EstimatePitch(testing::Sine(f0, 16000.0, 640), 16000.0);
    EXPECT_NEAR(est.f0_hz, f0, 5.0) << f0;
  }
}

TEST(LldTest, SilentFrameConventions) {
  const auto clip = MakeClip(std::vector<double>(800, 0.0));
  const auto llds = ComputeLlds(FrameSignal(clip), 16000.0);
  for (int f = 0; f < llds.rows(); ++f) {
    EXPECT_EQ(llds(f, LldColumn("rms")), 0.0);
    EXPECT_EQ(llds(f, LldColumn("zcr")), 0.0);
    EXPECT_EQ(llds(f, LldColumn("centroid")), 0.0);
    EXPECT_EQ(llds(f, LldColumn("flatness")), 1.0);
    EXPECT_EQ(llds(f, LldColumn("f0")), 0.0);
    for (int c = 0; c < llds.cols(); ++c) EXPECT_TRUE(std::isfinite(llds(f, c)));
  }
}

TEST(LldTest, RmsAndZeroCrossings) {
  // Alternating +-a crosses zero every sample.
  std::vector<double> x(400);
  for (size_t i = 0; i < x.size(); ++i) x[i] = i % 2 ? -0.5 : 0.5;
  const auto llds = ComputeLlds(FrameSignal(MakeClip(x)), 16000.0);
  EXPECT_NEAR(llds(0, LldColumn("rms")), 0.5, 1e-12);
  EXPECT_GT(llds(0, LldColumn("zcr")), 0.99);
}

std::vector<double> SimulateAr(std::vector<double> a, size_t n, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> e(0.0, 1.0);
  std::vector<double> x(n + 1000, 0.0);
  for (size_t i = 0; i < x.size(); ++i) {
    double v = e(gen);
    for (size_t k = 0; k < a.size(); ++k) {
      if (i > k) v -= a[k] * x[i - k - 1];
    }
    x[i] = v;
  }
  return {x.begin() + 1000, x.end()};
}

TEST(LpcTest, RecoversArOne) {
  const auto x = SimulateAr({-0.9}, 16000, 3);
  const auto r = LpcCoefficients(x, 1);
  EXPECT_FALSE(r.singular);
  EXPECT_NEAR(r.coefficients[0], -0.9, 0.05);
}

TEST(LpcTest, RecoversArTwoPoles) {
  const double radius = 0.9, angle = std::numbers::pi / 4;
  const double a1 = -2.0 * radius * std::cos(angle), a2 = radius * radius;
  const auto x = SimulateAr({a1, a2}, 16000, 4);
  const auto r = LpcCoefficients(x, 2);
  EXPECT_NEAR(r.coefficients[0], a1, 0.05);
  EXPECT_NEAR(r.coefficients[1], a2, 0.05);
  const auto r12 = LpcCoefficients(x, 12);
  EXPECT_NEAR(r12.coefficients[0], a1, 0.05);
  EXPECT_NEAR(r12.coefficients[1], a2, 0.05);
}

TEST(LpcTest, SilentInputIsSingular) {
  const auto r = LpcCoefficients(std::vector<double>(1000, 0.0), 12);
  EXPECT_TRUE(r.singular);
  EXPECT_EQ(r.coefficients, std::vector<double>(12, 0.0));
}

TEST(FunctionalsTest, ConstantColumn) {
  const auto f = ColumnFunctionals(std::vector<double>(30, 2.5));
  const std::array<double, kFunctionalCount> expected{2.5, 0, 2.5, 2.5, 0, 0,
                                                      0,   0, 0,   2.5, 2.5};
  EXPECT_EQ(f, expected);
}

TEST(FunctionalsTest, IndexColumn) {
  std::vector<double> col(40);
  for (size_t i = 0; i < col.size(); ++i) col[i] = double(i);
  const auto f = ColumnFunctionals(col);
  EXPECT_NEAR(f[7], 1.0, 1e-12);
  EXPECT_NEAR(f[8], 0.0, 1e-9);
  EXPECT_NEAR(f[0], 19.5, 1e-12);
  EXPECT_NEAR(f[5], 0.0, 1e-12);
}

// Independent statistics: two-pass moments, normal-equation regression and
// rank interpolation written from scratch.
std::array<double, kFunctionalCount> OracleFunctionals(const std::vector<double>& c) {
  const size_t n = c.size();
  long double s = 0;
  for (double v : c) s += v;
  const double mean = double(s / n);
  double var = 0;
  for (double v : c) var += std::pow(v - mean, 2);
  var /= n;
  const double sd = std::sqrt(var);
  double skew = 0, kurt = 0;
  for (double v : c) {
    skew += std::pow((v - mean) / sd, 3);
    kurt += std::pow((v - mean) / sd, 4);
  }
  skew /= n;
  kurt = kurt / n - 3.0;
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (size_t i = 0; i < n; ++i) {
    st += i;
    sy += c[i];
    stt += double(i) * i;
    sty += i * c[i];
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  const double icpt = (sy - slope * st) / n;
  double rss = 0;
  for (size_t i = 0; i < n; ++i) rss += std::pow(c[i] - icpt - slope * i, 2);
  auto sorted = c;
  std::sort(sorted.begin(), sorted.end());
  auto pct = [&](double q) {
    const double h = (n - 1) * q;
    const size_t k = size_t(h);
    if (k + 1 >= n) return sorted[n - 1];
    return sorted[k] * (1 - (h - k)) + sorted[k + 1] * (h - k);
  };
  return {mean,  sd,    sorted.front(),         sorted.back(),
          sorted.back() - sorted.front(),       skew,
          kurt,  slope, std::sqrt(rss / n),     pct(0.1),
          pct(0.9)};
}

TEST(FunctionalsTest, RandomMatrixMatchesOracle) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-3.0, 5.0);
  Eigen::MatrixXd llds(50, 3);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 3; ++j) llds(i, j) = u(gen) * (j + 1);
  }
  const auto v = ApplyFunctionals(llds);
  ASSERT_EQ(v.size(), 3 * kFunctionalCount);
  for (int j = 0; j < 3; ++j) {
    std::vector<double> col(50);
    for (int i = 0; i < 50; ++i) col[i] = llds(i, j);
    const auto expected = OracleFunctionals(col);
    for (size_t k = 0; k < kFunctionalCount; ++k) {
      EXPECT_NEAR(v[j * kFunctionalCount + k], expected[k], 1e-9)
          << "column " << j << " " << FunctionalNames()[k];
    }
  }
}

TEST(DctTest, InverseRecoversInput) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(26);
  for (double& v : x) v = u(gen);
  const auto c = Dct2(x, 26);
  const auto back = InverseDct2(c, 26);
  for (size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-8);
}

TEST(DctTest, MatchesDirectSum) {
  std::vector<double> x{1.0, -2.0, 0.5, 3.0, 0.0, 1.5};
  const size_t n = x.size();
  const auto c = Dct2(x, 4);
  ASSERT_EQ(c.size(), 4u);
  for (size_t k = 0; k < 4; ++k) {
    double s = 0;
    for (size_t i = 0; i < n; ++i) {
      s += x[i] * std::cos(std::numbers::pi * k * (2 * i + 1) / (2.0 * n));
    }
    s *= k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    EXPECT_NEAR(c[k], s, 1e-12);
  }
}

TEST(MelFilterbankTest, ToneLandsInOneRegion) {
  MelFilterbank bank(26, 512, 16000.0);
  std::vector<double> power(257, 0.0);
  power[64] = 1.0;  // 2 kHz
  const auto e = bank.Apply(power);
  ASSERT_EQ(e.size(), 26u);
  int nonzero = 0;
  for (double v : e) {
    EXPECT_GE(v, 0.0);
    nonzero += v > 0.0;
  }
  EXPECT_GE(nonzero, 1);
  EXPECT_LE(nonzero, 2);
}

TEST(SpectralFeaturesTest, SchemaAndVector) {
  EXPECT_EQ(SpectralSchema().size(), 265u);
  EXPECT_EQ(SpectralSchema().front(), "rms.mean");
  EXPECT_EQ(SpectralSchema().back(), "lpc12");
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n(0.0, 0.2);
  std::vector<double> x(8000);
  for (double& v : x) v = n(gen);
  const auto f = ExtractSpectralFeatures(MakeClip(x));
  ASSERT_EQ(f.values.size(), 265u);
  for (double v : f.values) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(ExtractSpectralFeatures(MakeClip(x)).values, f.values);
}

TEST(SelectFeaturesTest, NoReductionKeepsSchemaOrder) {
  const auto d = testing::ShiftedColumns(40, 20, {3}, 3.0, 1);
  const auto sel = SelectFeatures(d.x, d.y, 2, 20, 9);
  std::vector<size_t> expected(20);
  for (size_t i = 0; i < 20; ++i) expected[i] = i;
  EXPECT_EQ(sel.selected, expected);
}

TEST(SelectFeaturesTest, FindsInformativeColumns) {
  const auto d = testing::ShiftedColumns(500, 100, {13, 71}, 3.0, 77);
  ForestParams params;
  params.n_trees = 50;
  const auto sel = SelectFeatures(d.x, d.y, 2, 20, 5, params);
  ASSERT_EQ(sel.selected.size(), 20u);
  EXPECT_TRUE(std::count(sel.selected.begin(), sel.selected.end(), 13u));
  EXPECT_TRUE(std::count(sel.selected.begin(), sel.selected.end(), 71u));
  const auto again = SelectFeatures(d.x, d.y, 2, 20, 5, params);
  EXPECT_EQ(again.selected, sel.selected);
  EXPECT_EQ(again.importances, sel.importances);
}

TEST(SelectFeaturesTest, Errors) {
  const auto d = testing::ShiftedColumns(40, 5, {0}, 3.0, 1);
  EXPECT_CVD_ERROR(SelectFeatures(d.x, d.y, 2, 6, 1), ErrorCode::kInsufficientData);
  std::vector<int> one(40, 0);
  EXPECT_CVD_ERROR(SelectFeatures(d.x, one, 2, 3, 1), ErrorCode::kDegenerateLabels);
}

}  // namespace
}  // namespace cvd
