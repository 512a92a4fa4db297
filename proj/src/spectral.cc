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

#include "cvd/spectral.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cvd/error.h"
#include "cvd/standardize.h"
#include "fft.h"

namespace cvd {
namespace {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

double Percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * double(sorted.size() - 1);
  const size_t lo = size_t(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - double(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

PitchEstimate EstimatePitchWith(RealFft& fft, std::span<const double> frame,
                                double sample_rate_hz) {
  const size_t n = frame.size();
  PitchEstimate est;
  double energy = 0.0;
  for (double v : frame) energy += v * v;
  if (energy == 0.0) return est;

  const size_t max_lag =
      std::min<size_t>(size_t(std::floor(sample_rate_hz / kPitchMinHz)), n - 2);
  if (max_lag < 3) return est;

  std::vector<double> r;
  fft.Autocorrelation(frame, r);

  // head[t] = sum x[0..n-t-1]^2, tail[t] = sum x[t..n-1]^2.
  std::vector<double> head(max_lag + 2), tail(max_lag + 2);
  double h = energy, tl = energy;
  for (size_t t = 0; t <= max_lag + 1; ++t) {
    head[t] = h;
    tail[t] = tl;
    h -= frame[n - 1 - t] * frame[n - 1 - t];
    tl -= frame[t] * frame[t];
  }
  std::vector<double> ncc(max_lag + 2, 0.0);
  for (size_t t = 1; t <= max_lag + 1; ++t) {
    const double denom = std::sqrt(std::max(head[t], 0.0) * std::max(tail[t], 0.0));
    ncc[t] = denom > 0.0 ? r[t] / denom : 0.0;
  }

  double best = 0.0;
  for (size_t t = 2; t <= max_lag; ++t) {
    if (ncc[t] > ncc[t - 1] && ncc[t] >= ncc[t + 1]) best = std::max(best, ncc[t]);
  }
  if (best <= 0.0) return est;
  size_t lag = 0;
  for (size_t t = 2; t <= max_lag; ++t) {
    if (ncc[t] > ncc[t - 1] && ncc[t] >= ncc[t + 1] && ncc[t] >= 0.9 * best) {
      lag = t;
      break;
    }
  }
  est.voicing = std::clamp(ncc[lag], 0.0, 1.0);

  // Parabolic refinement around the chosen peak.
  const double a = ncc[lag - 1], b = ncc[lag], c = ncc[lag + 1];
  const double curvature = a - 2.0 * b + c;
  double refined = double(lag);
  if (curvature < 0.0) refined += 0.5 * (a - c) / curvature;

  const double f0 = sample_rate_hz / refined;
  constexpr double kVoicingThreshold = 0.45;
  if (est.voicing >= kVoicingThreshold && f0 >= kPitchMinHz && f0 <= kPitchMaxHz) {
    est.f0_hz = f0;
  }
  return est;
}

}  // namespace

std::vector<double> MakeWindow(WindowType type, size_t length) {
  std::vector<double> w(length, 1.0);
  if (length < 2) return w;
  const double denom = double(length - 1);
  for (size_t i = 0; i < length; ++i) {
    const double c = std::cos(2.0 * std::numbers::pi * double(i) / denom);
    switch (type) {
      case WindowType::kHamming: w[i] = 0.54 - 0.46 * c; break;
      case WindowType::kHann: w[i] = 0.5 - 0.5 * c; break;
      case WindowType::kRectangular: break;
    }
  }
  return w;
}

FrameMatrix FrameSignal(const AudioClip& clip, double frame_ms, double hop_ms,
                        WindowType window) {
  FrameMatrix fm;
  fm.frame_len = size_t(std::lround(frame_ms * clip.sample_rate_hz / 1000.0));
  fm.hop = size_t(std::lround(hop_ms * clip.sample_rate_hz / 1000.0));
  if (fm.frame_len == 0 || fm.hop == 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame and hop must be positive");
  }
  const size_t n = clip.samples.size();
  if (n < fm.frame_len) {
    throw Error(ErrorCode::kClipTooShort,
                "clip of " + std::to_string(n) + " samples is shorter than one " +
                    std::to_string(fm.frame_len) + "-sample frame");
  }
  fm.window_type = window;
  fm.window = MakeWindow(window, fm.frame_len);
  fm.n_frames = (n - fm.frame_len) / fm.hop + 1;
  fm.raw.resize(fm.n_frames * fm.frame_len);
  fm.windowed.resize(fm.n_frames * fm.frame_len);
  for (size_t f = 0; f < fm.n_frames; ++f) {
    for (size_t j = 0; j < fm.frame_len; ++j) {
      const double v = clip.samples[f * fm.hop + j];
      fm.raw[f * fm.frame_len + j] = v;
      fm.windowed[f * fm.frame_len + j] = v * fm.window[j];
    }
  }
  return fm;
}

const std::vector<std::string>& LldNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v = {"rms",       "log_energy", "zcr",
                                  "centroid",  "rolloff85",  "rolloff95",
                                  "flux",      "flatness"};
    for (int k = 0; k < kMfccCount; ++k) v.push_back("mfcc" + std::to_string(k));
    v.push_back("f0");
    v.push_back("voicing");
    return v;
  }();
  return names;
}

const std::vector<std::string>& FunctionalNames() {
  static const std::vector<std::string> names = {
      "mean",  "std",   "min",      "max", "range", "skewness",
      "kurtosis", "slope", "resid_rms", "p10", "p90"};
  return names;
}

MelFilterbank::MelFilterbank(int n_bands, size_t fft_size,
                             double sample_rate_hz) {
  const size_t bins = fft_size / 2 + 1;
  const double mel_hi = HzToMel(sample_rate_hz / 2.0);
  std::vector<double> edges(n_bands + 2);
  for (int i = 0; i < n_bands + 2; ++i) {
    edges[i] = MelToHz(mel_hi * double(i) / double(n_bands + 1));
  }
  weights_.assign(n_bands, std::vector<double>(bins, 0.0));
  for (int b = 0; b < n_bands; ++b) {
    const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
    for (size_t k = 0; k < bins; ++k) {
      const double f = double(k) * sample_rate_hz / double(fft_size);
      if (f > lo && f < mid) {
        weights_[b][k] = (f - lo) / (mid - lo);
      } else if (f >= mid && f < hi) {
        weights_[b][k] = (hi - f) / (hi - mid);
      }
    }
  }
}

std::vector<double> MelFilterbank::Apply(std::span<const double> power) const {
  std::vector<double> out(weights_.size(), 0.0);
  for (size_t b = 0; b < weights_.size(); ++b) {
    for (size_t k = 0; k < power.size() && k < weights_[b].size(); ++k) {
      out[b] += weights_[b][k] * power[k];
    }
  }
  return out;
}

std::vector<double> Dct2(std::span<const double> x, size_t n_out) {
  const size_t m = x.size();
  std::vector<double> c(n_out, 0.0);
  for (size_t k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < m; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * double(k) * (double(i) + 0.5) /
                             double(m));
    }
    c[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / double(m));
  }
  return c;
}

std::vector<double> InverseDct2(std::span<const double> c, size_t n_out) {
  std::vector<double> x(n_out, 0.0);
  for (size_t i = 0; i < n_out; ++i) {
    double acc = 0.0;
    for (size_t k = 0; k < c.size(); ++k) {
      acc += c[k] * std::sqrt((k == 0 ? 1.0 : 2.0) / double(n_out)) *
             std::cos(std::numbers::pi * double(k) * (double(i) + 0.5) /
                      double(n_out));
    }
    x[i] = acc;
  }
  return x;
}

PitchEstimate EstimatePitch(std::span<const double> frame,
                            double sample_rate_hz) {
  RealFft fft(NextPowerOfTwo(2 * frame.size()));
  return EstimatePitchWith(fft, frame, sample_rate_hz);
}

Eigen::MatrixXd ComputeLlds(const FrameMatrix& frames, double sample_rate_hz) {
  const size_t nfft = NextPowerOfTwo(frames.frame_len);
  RealFft spectrum_fft(nfft);
  RealFft pitch_fft(NextPowerOfTwo(2 * frames.frame_len));
  const MelFilterbank mel(kMelBands, nfft, sample_rate_hz);
  const size_t bins = nfft / 2 + 1;
  const double bin_hz = sample_rate_hz / double(nfft);

  Eigen::MatrixXd llds(frames.n_frames, LldNames().size());
  std::vector<double> power, magnitude(bins), prev_magnitude(bins, 0.0);
  for (size_t f = 0; f < frames.n_frames; ++f) {
    const auto raw = frames.Raw(f);
    const size_t n = raw.size();
    int col = 0;

    double energy = 0.0;
    size_t crossings = 0;
    for (size_t i = 0; i < n; ++i) {
      energy += raw[i] * raw[i];
      if (i > 0 && (raw[i] >= 0.0) != (raw[i - 1] >= 0.0)) ++crossings;
    }
    llds(f, col++) = std::sqrt(energy / double(n));
    llds(f, col++) = std::log(std::max(energy, kLogFloor));
    llds(f, col++) = n > 1 ? double(crossings) / double(n - 1) : 0.0;

    spectrum_fft.PowerSpectrum(frames.Windowed(f), power);
    double total = 0.0, weighted = 0.0;
    for (size_t k = 0; k < bins; ++k) {
      total += power[k];
      weighted += power[k] * double(k) * bin_hz;
      magnitude[k] = std::sqrt(power[k]);
    }
    double centroid = 0.0, roll85 = 0.0, roll95 = 0.0, flatness = 1.0;
    if (total > 0.0) {
      centroid = weighted / total;
      double cum = 0.0;
      bool have85 = false;
      for (size_t k = 0; k < bins; ++k) {
        cum += power[k];
        if (!have85 && cum >= 0.85 * total) {
          roll85 = double(k) * bin_hz;
          have85 = true;
        }
        if (cum >= 0.95 * total) {
          roll95 = double(k) * bin_hz;
          break;
        }
      }
      double log_sum = 0.0;
      for (size_t k = 0; k < bins; ++k) log_sum += std::log(std::max(power[k], 1e-20));
      flatness = std::exp(log_sum / double(bins)) / (total / double(bins));
    }
    double flux = 0.0;
    if (f > 0) {
      for (size_t k = 0; k < bins; ++k) {
        const double d = magnitude[k] - prev_magnitude[k];
        flux += d * d;
      }
      flux = std::sqrt(flux);
    }
    prev_magnitude = magnitude;
    llds(f, col++) = centroid;
    llds(f, col++) = roll85;
    llds(f, col++) = roll95;
    llds(f, col++) = flux;
    llds(f, col++) = flatness;

    std::vector<double> bands = mel.Apply(power);
    for (double& b : bands) b = std::log(std::max(b, kLogFloor));
    const auto mfcc = Dct2(bands, kMfccCount);
    for (double c : mfcc) llds(f, col++) = c;

    const PitchEstimate pitch = EstimatePitchWith(pitch_fft, raw, sample_rate_hz);
    llds(f, col++) = pitch.f0_hz;
    llds(f, col++) = pitch.voicing;
  }
  return llds;
}

LpcResult LpcCoefficients(std::span<const double> samples, int order) {
  if (order < 1 || samples.size() <= size_t(order)) {
    throw Error(ErrorCode::kClipTooShort,
                "LPC of order " + std::to_string(order) + " needs more than " +
                    std::to_string(order) + " samples");
  }
  const auto window = MakeWindow(WindowType::kHamming, samples.size());
  std::vector<double> x(samples.size());
  for (size_t i = 0; i < x.size(); ++i) x[i] = samples[i] * window[i];

  std::vector<double> r(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    for (size_t i = 0; i + k < x.size(); ++i) r[k] += x[i] * x[i + k];
  }

  LpcResult res;
  res.coefficients.assign(order, 0.0);
  if (r[0] == 0.0) {
    res.singular = true;
    return res;
  }
  std::vector<double> a(order + 1, 0.0), prev(order + 1, 0.0);
  a[0] = 1.0;
  double err = r[0];
  for (int i = 1; i <= order; ++i) {
    double acc = r[i];
    for (int j = 1; j < i; ++j) acc += a[j] * r[i - j];
    const double k = -acc / err;
    prev = a;
    for (int j = 1; j < i; ++j) a[j] = prev[j] + k * prev[i - j];
    a[i] = k;
    err *= (1.0 - k * k);
    if (err <= 0.0) break;
  }
  std::copy(a.begin() + 1, a.end(), res.coefficients.begin());
  return res;
}

std::array<double, kFunctionalCount> ColumnFunctionals(
    std::span<const double> column) {
  const size_t n = column.size();
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  std::array<double, kFunctionalCount> out{};
  if (lo == hi) {
    // Zero variance: skewness and kurtosis are taken as 0.
    out = {lo, 0.0, lo, hi, 0.0, 0.0, 0.0, 0.0, 0.0, lo, hi};
    return out;
  }
  const double dn = double(n);
  double sum = 0.0;
  for (double v : column) sum += v;
  const double mean = sum / dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : column) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  const double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  const double kurt = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

  const double t_mean = (dn - 1.0) / 2.0;
  double stt = 0.0, sty = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dt = double(i) - t_mean;
    stt += dt * dt;
    sty += dt * (column[i] - mean);
  }
  const double slope = stt > 0.0 ? sty / stt : 0.0;
  const double intercept = mean - slope * t_mean;
  double rss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = column[i] - (intercept + slope * double(i));
    rss += e * e;
  }
  out = {mean,
         std::sqrt(m2),
         lo,
         hi,
         hi - lo,
         skew,
         kurt,
         slope,
         std::sqrt(rss / dn),
         Percentile(sorted, 0.10),
         Percentile(sorted, 0.90)};
  return out;
}

std::vector<double> ApplyFunctionals(const Eigen::MatrixXd& llds) {
  if (llds.rows() < 2) {
    throw Error(ErrorCode::kTooFewFrames,
                "functionals need at least 2 frames, got " +
                    std::to_string(llds.rows()));
  }
  std::vector<double> out;
  out.reserve(size_t(llds.cols()) * kFunctionalCount);
  std::vector<double> column(llds.rows());
  for (Eigen::Index c = 0; c < llds.cols(); ++c) {
    for (Eigen::Index r = 0; r < llds.rows(); ++r) column[r] = llds(r, c);
    const auto f = ColumnFunctionals(column);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

const std::vector<std::string>& SpectralSchema() {
  static const std::vector<std::string> schema = [] {
    std::vector<std::string> v;
    for (const auto& d : LldNames()) {
      for (const auto& f : FunctionalNames()) v.push_back(d + "." + f);
    }
    for (int k = 1; k <= kLpcOrder; ++k) v.push_back("lpc" + std::to_string(k));
    return v;
  }();
  return schema;
}

SpectralFeatureVector ExtractSpectralFeatures(const AudioClip& clip) {
  const FrameMatrix frames = FrameSignal(clip);
  const Eigen::MatrixXd llds = ComputeLlds(frames, clip.sample_rate_hz);
  SpectralFeatureVector out;
  out.values = ApplyFunctionals(llds);
  const LpcResult lpc = LpcCoefficients(clip.samples, kLpcOrder);
  out.values.insert(out.values.end(), lpc.coefficients.begin(),
                    lpc.coefficients.end());
  return out;
}

FeatureSelection SelectFeatures(const Eigen::MatrixXd& x,
                                std::span<const int> y, int n_classes,
                                size_t k, uint64_t seed,
                                const ForestParams& params, int workers) {
  const size_t d = size_t(x.cols());
  if (size_t(x.rows()) != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature rows and labels differ");
  }
  if (x.rows() < 10 || d < k || k == 0) {
    throw Error(ErrorCode::kInsufficientData,
                "selection needs n >= 10 and d >= k > 0");
  }
  std::vector<int> present(n_classes, 0);
  for (int c : y) present.at(size_t(c)) = 1;
  if (std::accumulate(present.begin(), present.end(), 0) < 2) {
    throw Error(ErrorCode::kDegenerateLabels, "selection labels have one class");
  }

  FeatureSelection sel;
  sel.seed = seed;
  if (d == k) {
    sel.selected.resize(d);
    std::iota(sel.selected.begin(), sel.selected.end(), size_t{0});
    sel.importances.assign(d, 0.0);
    return sel;
  }
  const Eigen::MatrixXd z = Standardizer::Fit(x).Apply(x);
  const ForestFit fit = TrainForest(z, y, n_classes, params, seed, workers);
  sel.importances = fit.importances;

  std::vector<size_t> order(d);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return sel.importances[a] > sel.importances[b];
  });
  sel.selected.assign(order.begin(), order.begin() + long(k));
  return sel;
}

}  // namespace cvd
