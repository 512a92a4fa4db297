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

#ifndef CVD_IIR_FILTER_H_
#define CVD_IIR_FILTER_H_

#include <span>
#include <vector>

namespace cvd {

// One second-order section, normalized so a0 == 1:
//   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
// First-order sections have b2 == a2 == 0.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

class SosFilter {
 public:
  SosFilter() = default;
  explicit SosFilter(std::vector<Biquad> sections)
      : sections_(std::move(sections)) {}

  const std::vector<Biquad>& sections() const { return sections_; }

  // Single causal pass from zero initial state.
  std::vector<double> Filter(std::span<const double> x) const;

  // Zero-phase forward-backward filtering. The input is extended by odd
  // reflection at both ends and each pass starts from the steady state of
  // its first sample, so a constant input comes out constant.
  std::vector<double> FiltFilt(std::span<const double> x) const;

 private:
  std::vector<double> Run(std::span<const double> x, bool steady_start) const;

  std::vector<Biquad> sections_;
};

// Digital Butterworth lowpass via the bilinear transform with frequency
// prewarping. Unity gain at DC.
SosFilter DesignButterworthLowpass(int order, double cutoff_hz,
                                   double sample_rate_hz);

}  // namespace cvd

#endif  // CVD_IIR_FILTER_H_
