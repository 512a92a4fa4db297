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

#ifndef CVD_TESTS_SUPPORT_SYNTHETIC_CORPUS_H_
#define CVD_TESTS_SUPPORT_SYNTHETIC_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cvd/audio.h"

namespace cvd::testing {

// Population parameters of one side of the synthetic corpus.
struct VoiceProfile {
  double pause_ratio_mean = 0.0;
  double pause_ratio_std = 0.0;
  double amplitude_mean = 0.0;
  double amplitude_std = 0.0;
  int min_pauses = 1;
  int max_pauses = 1;
  double modulation_depth = 0.5;
};

// Human-like speech: long and frequent pauses, quiet and strongly modulated.
VoiceProfile RealLikeProfile();
// Cloned-like speech: shorter pauses, louder, flatter.
VoiceProfile FakeLikeProfile();

// One 16 kHz clip of harmonic "syllables" separated by exact silences. The
// peak is 1, the silent fraction follows the drawn pause ratio and the mean
// rectified amplitude follows the drawn amplitude.
AudioClip GenerateVoiceClip(const VoiceProfile& profile, uint64_t seed,
                            size_t n_samples = 32000);

struct CorpusLayout {
  std::string real_dir;
  std::string synthetic_dir;
};

// Writes n_real clips under <root>/real and n_fake under <root>/fake/<arch>.
CorpusLayout WriteSyntheticCorpus(const std::string& root, size_t n_real,
                                  size_t n_fake, const std::string& arch,
                                  uint64_t seed);

}  // namespace cvd::testing

#endif  // CVD_TESTS_SUPPORT_SYNTHETIC_CORPUS_H_
