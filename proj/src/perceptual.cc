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

#include "cvd/perceptual.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "cvd/error.h"
#include "cvd/iir_filter.h"

namespace cvd {
namespace {

// Incremental window sums are re-seeded from a direct sum this often.
constexpr size_t kReanchorInterval = 1024;

double DirectWindowSum(std::span<const double> x, size_t start) {
  double s = 0.0;
  for (size_t j = start; j < start + kPauseWindow; ++j) s += std::abs(x[j]);
  return s;
}

double Mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double SampleVariance(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / double(v.size() - 1);
}

}  // namespace

std::array<double, PerceptualFeatures::kDim> PerceptualFeatures::ToArray()
    const {
  return {pauses.ratio,     pauses.mean_len,      pauses.std_len,
          double(pauses.count), amplitude.mean, amplitude.deriv_mean};
}

std::vector<std::string> PerceptualFeatures::Schema() {
  return {"pause_ratio", "pause_len_mean", "pause_len_std",
          "pause_count", "amp_mean",       "amp_deriv_mean"};
}

std::vector<PauseSegment> DetectPauses(std::span<const double> x) {
  const size_t n = x.size();
  if (n < kPauseWindow) {
    throw Error(ErrorCode::kClipTooShort,
                "pause detection needs at least 100 samples, got " +
                    std::to_string(n));
  }
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return {{0, n}};

  // A window is marked when (sum / W) < kPauseThreshold * peak, with the sum
  // accumulated left to right. The running sum is only trusted when it is
  // clear of the threshold by more than its accumulated rounding error;
  // otherwise the window is summed directly.
  const double threshold_mean = kPauseThreshold * peak;
  const double threshold_sum = threshold_mean * double(kPauseWindow);
  const double margin = double(4 * kReanchorInterval + 4 * kPauseWindow) *
                        std::numeric_limits<double>::epsilon() *
                        double(kPauseWindow) * peak;

  std::vector<PauseSegment> segments;
  const size_t positions = n - kPauseWindow + 1;
  double running = 0.0;
  bool in_run = false;
  size_t run_start = 0;
  for (size_t i = 0; i < positions; ++i) {
    if (i % kReanchorInterval == 0) {
      running = DirectWindowSum(x, i);
    } else {
      running += std::abs(x[i + kPauseWindow - 1]) - std::abs(x[i - 1]);
    }
    bool marked;
    if (running < threshold_sum - margin) {
      marked = true;
    } else if (running > threshold_sum + margin) {
      marked = false;
    } else {
      marked = DirectWindowSum(x, i) / double(kPauseWindow) < threshold_mean;
    }

    if (marked && !in_run) {
      in_run = true;
      run_start = i;
    }
    if (in_run && (!marked || i + 1 == positions)) {
      const size_t last = marked ? i : i - 1;
      PauseSegment seg{run_start, last + kPauseWindow};
      if (!segments.empty() && seg.start <= segments.back().end) {
        segments.back().end = std::max(segments.back().end, seg.end);
      } else {
        segments.push_back(seg);
      }
      in_run = false;
    }
  }
  return segments;
}

PauseStatistics ComputePauseStatistics(std::span<const PauseSegment> pauses,
                                       size_t clip_len) {
  if (clip_len == 0) {
    throw Error(ErrorCode::kInvalidArgument, "clip length must be positive");
  }
  PauseStatistics stats;
  if (pauses.empty()) return stats;

  size_t prev_end = 0;
  double total = 0.0;
  for (size_t i = 0; i < pauses.size(); ++i) {
    const PauseSegment& p = pauses[i];
    if (p.start >= p.end || p.end > clip_len || (i > 0 && p.start < prev_end)) {
      throw Error(ErrorCode::kSegmentOutOfRange,
                  "pause [" + std::to_string(p.start) + ", " +
                      std::to_string(p.end) + ") invalid for clip of " +
                      std::to_string(clip_len) + " samples");
    }
    prev_end = p.end;
    total += double(p.length());
  }
  stats.count = pauses.size();
  stats.ratio = total / double(clip_len);
  stats.mean_len = total / double(stats.count);
  double ss = 0.0;
  for (const PauseSegment& p : pauses) {
    const double d = double(p.length()) - stats.mean_len;
    ss += d * d;
  }
  stats.std_len = std::sqrt(ss / double(stats.count));
  return stats;
}

std::vector<double> SmoothEnvelope(const AudioClip& clip, double cutoff_hz) {
  if (clip.samples.empty()) {
    throw Error(ErrorCode::kEmptyClip, "empty clip '" + clip.clip_id + "'");
  }
  const SosFilter filter = DesignButterworthLowpass(
      kEnvelopeFilterOrder, cutoff_hz, double(clip.sample_rate_hz));
  std::vector<double> rectified(clip.samples.size());
  std::transform(clip.samples.begin(), clip.samples.end(), rectified.begin(),
                 [](double v) { return std::abs(v); });
  std::vector<double> env = filter.FiltFilt(rectified);
  for (double& v : env) v = std::max(v, 0.0);
  return env;
}

AmplitudeFeatures ComputeAmplitudeFeatures(std::span<const double> envelope) {
  if (envelope.empty()) {
    throw Error(ErrorCode::kEmptyEnvelope, "envelope has no samples");
  }
  AmplitudeFeatures f;
  f.mean = Mean(envelope);
  if (envelope.size() > 1) {
    double s = 0.0;
    for (size_t i = 1; i < envelope.size(); ++i) {
      s += std::abs(envelope[i] - envelope[i - 1]);
    }
    f.deriv_mean = s / double(envelope.size() - 1);
  }
  return f;
}

PerceptualFeatures ExtractPerceptualFeatures(const AudioClip& clip,
                                             const PerceptualOptions& options) {
  const bool silent = std::all_of(clip.samples.begin(), clip.samples.end(),
                                  [](double v) { return v == 0.0; });
  if (silent) {
    throw Error(ErrorCode::kDegenerateSilence,
                "clip '" + clip.clip_id + "' is all zeros");
  }
  PerceptualFeatures f;
  const auto pauses = DetectPauses(clip.samples);
  f.pauses = ComputePauseStatistics(pauses, clip.samples.size());
  f.amplitude = ComputeAmplitudeFeatures(
      SmoothEnvelope(clip, options.envelope_cutoff_hz));
  return f;
}

TTestResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "t-test needs at least two values per sample");
  }
  const double ma = Mean(a), mb = Mean(b);
  const double va = SampleVariance(a, ma), vb = SampleVariance(b, mb);
  const double na = double(a.size()), nb = double(b.size());

  TTestResult r;
  if (va == 0.0 && vb == 0.0) {
    if (ma != mb) {
      throw Error(ErrorCode::kZeroVariance,
                  "both samples are constant with different values");
    }
    r.dof = na + nb - 2.0;
    return r;
  }
  const double qa = va / na, qb = vb / nb;
  const double se2 = qa + qb;
  r.t = (ma - mb) / std::sqrt(se2);
  r.dof = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  const boost::math::students_t dist(r.dof);
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(
                                dist, std::abs(r.t))));
  return r;
}

}  // namespace cvd
