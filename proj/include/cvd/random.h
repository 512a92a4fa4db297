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

#ifndef CVD_RANDOM_H_
#define CVD_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace cvd {

// Seed mixing. Used to derive independent per-tree, per-clip and
// per-stratum streams from one run seed.
uint64_t SplitMix64(uint64_t x);
uint64_t DeriveSeed(uint64_t seed, uint64_t salt);
uint64_t DeriveSeed(uint64_t seed, std::string_view salt);

// Random source whose output is fully specified by the seed. The standard
// distributions are implementation-defined, so the draws below are written
// against the raw mt19937_64 stream to keep artifacts byte-identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, n). n must be > 0.
  size_t UniformIndex(size_t n);
  // Uniform in [0, 1) with 53 random bits.
  double Uniform01();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  // Standard normal via the Marsaglia polar method.
  double Normal();

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = UniformIndex(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cvd

#endif  // CVD_RANDOM_H_
