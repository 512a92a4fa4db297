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

#include "fft.h"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

namespace cvd {
namespace {

// The FFTW planner is not reentrant.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

RealFft::RealFft(size_t size) : size_(size) {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  real_ = fftw_alloc_real(size_);
  spectrum_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(bins()));
  forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(size_), real_,
                                  reinterpret_cast<fftw_complex*>(spectrum_),
                                  FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(size_),
                                  reinterpret_cast<fftw_complex*>(spectrum_),
                                  real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
  fftw_free(real_);
  fftw_free(spectrum_);
}

void RealFft::Load(std::span<const double> input) {
  const size_t n = std::min(input.size(), size_);
  std::copy_n(input.begin(), n, real_);
  std::fill(real_ + n, real_ + size_, 0.0);
}

void RealFft::PowerSpectrum(std::span<const double> input,
                            std::vector<double>& power) {
  Load(input);
  fftw_execute(static_cast<fftw_plan>(forward_));
  power.resize(bins());
  for (size_t k = 0; k < bins(); ++k) power[k] = std::norm(spectrum_[k]);
}

void RealFft::Autocorrelation(std::span<const double> input,
                              std::vector<double>& out) {
  Load(input);
  fftw_execute(static_cast<fftw_plan>(forward_));
  for (size_t k = 0; k < bins(); ++k) spectrum_[k] = std::norm(spectrum_[k]);
  // c2r overwrites its input; the spectrum is not reused afterwards.
  fftw_execute(static_cast<fftw_plan>(inverse_));
  out.assign(real_, real_ + size_);
  const double scale = 1.0 / double(size_);
  for (double& v : out) v *= scale;
}

}  // namespace cvd
