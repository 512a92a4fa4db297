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

#ifndef CVD_EMBEDDINGS_H_
#define CVD_EMBEDDINGS_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cvd/dataset.h"
#include "cvd/types.h"

namespace cvd {

inline constexpr size_t kEmbeddingDim = 192;

struct Embedding {
  std::string clip_id;
  std::vector<double> vector;

  bool operator==(const Embedding&) const = default;
};

struct EmbeddingSet {
  std::map<std::string, Embedding> embeddings;
  size_t extras = 0;  // rows whose clip is not in the manifest
};

// Exchange format: a required "#dim=192" header, "#" comment lines, and
// records "clip_id<TAB>v1,...,v192".
EmbeddingSet ParseEmbeddings(const std::string& text,
                             std::span<const std::string> clip_ids);
EmbeddingSet LoadEmbeddings(const std::string& path,
                            const DatasetManifest& manifest);

// Writes 17 significant digits so the values survive a round trip.
std::string SerializeEmbeddings(std::span<const Embedding> embeddings);
void SaveEmbeddings(const std::string& path,
                    std::span<const Embedding> embeddings);

FeatureVector EmbeddingFeatureVector(const Embedding& e);

}  // namespace cvd

#endif  // CVD_EMBEDDINGS_H_
