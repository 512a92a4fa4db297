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

#include "support/test_util.h"

#include <numbers>
#include <stdexcept>

#include <stdlib.h>

namespace cvd::testing {

ScratchDir::ScratchDir() {
  std::string templ =
      (std::filesystem::temp_directory_path() / "cvd-test-XXXXXX").string();
  if (!::mkdtemp(templ.data())) throw std::runtime_error("mkdtemp failed");
  path_ = templ;
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

AudioClip MakeClip(std::vector<double> samples, int rate, std::string id) {
  AudioClip c;
  c.clip_id = std::move(id);
  c.samples = std::move(samples);
  c.sample_rate_hz = rate;
  return c;
}

std::vector<double> Sine(double freq_hz, double rate_hz, size_t n,
                         double amplitude, double phase) {
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = amplitude *
           std::sin(2.0 * std::numbers::pi * freq_hz * double(i) / rate_hz + phase);
  }
  return x;
}

double DftMagnitude(const std::vector<double>& x, size_t k) {
  double re = 0.0, im = 0.0;
  const double n = double(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double a = -2.0 * std::numbers::pi * double(k) * double(i) / n;
    re += x[i] * std::cos(a);
    im += x[i] * std::sin(a);
  }
  return std::hypot(re, im);
}

}  // namespace cvd::testing
