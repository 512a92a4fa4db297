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

#include "cvd/embeddings.h"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "cvd/error.h"
#include "cvd/text.h"

namespace cvd {

EmbeddingSet ParseEmbeddings(const std::string& text,
                             std::span<const std::string> clip_ids) {
  const std::set<std::string> wanted(clip_ids.begin(), clip_ids.end());
  EmbeddingSet out;
  std::set<std::string> seen_extra;
  bool have_dim = false;
  const auto lines = Split(text, '\n');
  for (size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (StartsWith(line, "#dim=")) {
        const auto dim = ParseInt(Trim(line.substr(5)), "dim");
        if (dim != int64_t(kEmbeddingDim)) {
          throw Error(ErrorCode::kDimensionMismatch,
                      fmt::format("header declares dim={}, expected {}", dim,
                                  kEmbeddingDim));
        }
        have_dim = true;
      }
      continue;
    }
    if (!have_dim) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "embedding file lacks the #dim=192 header");
    }
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kParseError,
                  fmt::format("line {}: expected clip_id<TAB>values", n + 1));
    }
    Embedding e;
    e.clip_id = std::string(line.substr(0, tab));
    e.vector = ParseDoubleList(line.substr(tab + 1), ',', "embedding value");
    if (e.vector.size() != kEmbeddingDim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  fmt::format("line {} (clip {}): {} values, expected {}", n + 1,
                              e.clip_id, e.vector.size(), kEmbeddingDim));
    }
    for (double v : e.vector) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteValue,
                    fmt::format("line {} (clip {}): non-finite value", n + 1,
                                e.clip_id));
      }
    }
    if (out.embeddings.count(e.clip_id) || seen_extra.count(e.clip_id)) {
      throw Error(ErrorCode::kDuplicateClip,
                  fmt::format("line {}: clip {} appears twice", n + 1, e.clip_id));
    }
    if (!wanted.count(e.clip_id)) {
      seen_extra.insert(e.clip_id);
      ++out.extras;
      continue;
    }
    const std::string id = e.clip_id;
    out.embeddings.emplace(id, std::move(e));
  }
  if (!have_dim) {
    throw Error(ErrorCode::kSchemaMismatch,
                "embedding file lacks the #dim=192 header");
  }
  for (const auto& id : wanted) {
    if (!out.embeddings.count(id)) {
      throw Error(ErrorCode::kMissingClip, "no embedding for clip " + id);
    }
  }
  return out;
}

EmbeddingSet LoadEmbeddings(const std::string& path,
                            const DatasetManifest& manifest) {
  const auto ids = manifest.ClipIds();
  return ParseEmbeddings(ReadFile(path), ids);
}

std::string SerializeEmbeddings(std::span<const Embedding> embeddings) {
  std::string out = fmt::format("#dim={}\n", kEmbeddingDim);
  for (const auto& e : embeddings) {
    if (e.vector.size() != kEmbeddingDim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  fmt::format("clip {}: {} values", e.clip_id, e.vector.size()));
    }
    out += e.clip_id;
    out.push_back('\t');
    for (size_t i = 0; i < e.vector.size(); ++i) {
      if (i) out.push_back(',');
      out += FormatDouble(e.vector[i], 17);
    }
    out.push_back('\n');
  }
  return out;
}

void SaveEmbeddings(const std::string& path,
                    std::span<const Embedding> embeddings) {
  WriteFile(path, SerializeEmbeddings(embeddings));
}

FeatureVector EmbeddingFeatureVector(const Embedding& e) {
  return {FeatureFamily::kLearned, e.vector};
}

}  // namespace cvd
