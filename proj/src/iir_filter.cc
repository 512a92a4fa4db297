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

#include "cvd/iir_filter.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "cvd/error.h"

namespace cvd {

std::vector<double> SosFilter::Run(std::span<const double> x,
                                   bool steady_start) const {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  for (const Biquad& s : sections_) {
    // Transposed direct form II.
    double z1 = 0.0, z2 = 0.0;
    if (steady_start) {
      // Sections have unit DC gain, so the steady state for input u has
      // output u as well.
      const double u = y.front();
      z2 = (s.b2 - s.a2) * u;
      z1 = (s.b1 - s.a1) * u + z2;
    }
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> SosFilter::Filter(std::span<const double> x) const {
  return Run(x, false);
}

std::vector<double> SosFilter::FiltFilt(std::span<const double> x) const {
  const size_t n = x.size();
  if (n == 0) return {};
  const size_t pad = std::min(n - 1, 3 * (2 * sections_.size() + 1));

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  std::vector<double> fwd = Run(ext, true);
  std::reverse(fwd.begin(), fwd.end());
  std::vector<double> back = Run(fwd, true);
  std::reverse(back.begin(), back.end());
  return std::vector<double>(back.begin() + pad, back.begin() + pad + n);
}

SosFilter DesignButterworthLowpass(int order, double cutoff_hz,
                                   double sample_rate_hz) {
  if (order < 1) throw Error(ErrorCode::kInvalidArgument, "filter order < 1");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
    throw Error(ErrorCode::kInvalidCutoff,
                "cutoff must lie in (0, fs/2), got " + std::to_string(cutoff_hz));
  }
  const double fs2 = 2.0 * sample_rate_hz;
  const double warped =
      fs2 * std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);

  std::vector<Biquad> sections;
  // Analog prototype poles lie on the left half of a circle of radius
  // `warped`; take one of each conjugate pair.
  for (int k = 0; k < order / 2; ++k) {
    const double theta =
        std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    const std::complex<double> s = warped * std::polar(1.0, theta);
    const std::complex<double> z = (fs2 + s) / (fs2 - s);
    Biquad bq;
    bq.a1 = -2.0 * z.real();
    bq.a2 = std::norm(z);
    const double gain = (1.0 + bq.a1 + bq.a2) / 4.0;  // zeros at z = -1
    bq.b0 = gain;
    bq.b1 = 2.0 * gain;
    bq.b2 = gain;
    sections.push_back(bq);
  }
  if (order % 2 == 1) {
    const double z = (fs2 - warped) / (fs2 + warped);
    Biquad bq;
    bq.a1 = -z;
    const double gain = (1.0 + bq.a1) / 2.0;
    bq.b0 = gain;
    bq.b1 = gain;
    sections.push_back(bq);
  }
  return SosFilter(std::move(sections));
}

}  // namespace cvd
