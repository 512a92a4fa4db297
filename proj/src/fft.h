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

#ifndef CVD_SRC_FFT_H_
#define CVD_SRC_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cvd {

size_t NextPowerOfTwo(size_t n);

// Real-to-complex transform of fixed size backed by FFTW. Each instance owns
// its plan and buffers; distinct instances may run on different threads.
class RealFft {
 public:
  explicit RealFft(size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  size_t size() const { return size_; }
  size_t bins() const { return size_ / 2 + 1; }

  // Input shorter than size() is zero-padded. Fills power[k] = |X[k]|^2.
  void PowerSpectrum(std::span<const double> input, std::vector<double>& power);

  // Circular autocorrelation r[k] = sum_n x[n] x[(n + k) mod size]; callers
  // zero-pad to at least twice the signal length for the linear one.
  void Autocorrelation(std::span<const double> input, std::vector<double>& out);

 private:
  void Load(std::span<const double> input);

  size_t size_;
  double* real_ = nullptr;
  std::complex<double>* spectrum_ = nullptr;
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
};

}  // namespace cvd

#endif  // CVD_SRC_FFT_H_
