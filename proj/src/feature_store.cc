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

#include "cvd/feature_store.h"

#include <cmath>

#include <fmt/format.h>

#include "cvd/embeddings.h"
#include "cvd/error.h"
#include "cvd/perceptual.h"
#include "cvd/spectral.h"
#include "cvd/text.h"

namespace cvd {
namespace {

constexpr const char* kStoreHeader = "#features-v1";

std::string JoinNames(std::span<const std::string> names) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out.push_back(',');
    out += names[i];
  }
  return out;
}

std::string_view HeaderField(std::string_view header, std::string_view key) {
  for (auto f : Split(header, ' ')) {
    if (StartsWith(f, key) && f.size() > key.size() && f[key.size()] == '=') {
      return f.substr(key.size() + 1);
    }
  }
  throw Error(ErrorCode::kSchemaMismatch,
              "feature store header lacks " + std::string(key));
}

}  // namespace

std::vector<std::string> FamilySchema(FeatureFamily family) {
  switch (family) {
    case FeatureFamily::kPerceptual: return PerceptualFeatures::Schema();
    case FeatureFamily::kSpectral: return SpectralSchema();
    case FeatureFamily::kLearned: {
      std::vector<std::string> names;
      for (size_t i = 0; i < kEmbeddingDim; ++i) names.push_back(fmt::format("emb{}", i));
      return names;
    }
  }
  return {};
}

std::string SchemaHash(std::span<const std::string> schema) {
  return HexU64(Fnv1a64(JoinNames(schema)));
}

FeatureStore::FeatureStore(FeatureFamily family, std::vector<std::string> schema)
    : family_(family), schema_(std::move(schema)) {}

void FeatureStore::Add(const std::string& clip_id, std::vector<double> values) {
  if (values.size() != schema_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("clip {}: {} values, store expects {}", clip_id,
                            values.size(), schema_.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValue, "clip " + clip_id + ": non-finite feature");
    }
  }
  if (clip_id.empty() || clip_id.find_first_of("\t\r\n") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "bad clip id '" + clip_id + "'");
  }
  if (!index_.emplace(clip_id, rows_.size()).second) {
    throw Error(ErrorCode::kDuplicateClip, "clip " + clip_id + " stored twice");
  }
  clip_ids_.push_back(clip_id);
  rows_.push_back(std::move(values));
}

const std::vector<double>& FeatureStore::Get(const std::string& clip_id) const {
  auto it = index_.find(clip_id);
  if (it == index_.end()) {
    throw Error(ErrorCode::kMissingClip,
                fmt::format("clip {} is not in the {} feature store", clip_id,
                            ToString(family_)));
  }
  return rows_[it->second];
}

bool FeatureStore::Contains(const std::string& clip_id) const {
  return index_.count(clip_id) > 0;
}

std::string FeatureStore::Serialize() const {
  std::string out = fmt::format("{} family={} dim={} schema_hash={}\n", kStoreHeader,
                                ToString(family_), schema_.size(),
                                SchemaHash(schema_));
  out += "#schema=" + JoinNames(schema_) + "\n";
  for (size_t i = 0; i < rows_.size(); ++i) {
    out += clip_ids_[i];
    out.push_back('\t');
    out += JoinDoubles(rows_[i]);
    out.push_back('\n');
  }
  return out;
}

FeatureStore FeatureStore::Parse(const std::string& text,
                                 const std::vector<std::string>& expected) {
  const auto lines = Split(text, '\n');
  if (lines.size() < 2 || !StartsWith(lines[0], std::string(kStoreHeader) + " ")) {
    throw Error(ErrorCode::kSchemaMismatch, "not a features-v1 store");
  }
  const auto header = lines[0];
  const FeatureFamily family = ParseFeatureFamily(HeaderField(header, "family"));
  const int64_t dim = ParseInt(HeaderField(header, "dim"), "dim");
  const std::string hash(HeaderField(header, "schema_hash"));
  if (!StartsWith(lines[1], "#schema=")) {
    throw Error(ErrorCode::kSchemaMismatch, "feature store lacks a #schema line");
  }
  std::vector<std::string> schema;
  for (auto n : Split(lines[1].substr(8), ',')) schema.emplace_back(n);
  if (int64_t(schema.size()) != dim || SchemaHash(schema) != hash) {
    throw Error(ErrorCode::kSchemaMismatch,
                "feature store schema does not match its header");
  }
  if (!expected.empty() && SchemaHash(expected) != hash) {
    throw Error(ErrorCode::kSchemaMismatch,
                fmt::format("feature store schema hash {} differs from the "
                            "expected {}",
                            hash, SchemaHash(expected)));
  }
  FeatureStore store(family, std::move(schema));
  for (size_t n = 2; n < lines.size(); ++n) {
    auto line = lines[n];
    if (line.empty() || line.front() == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kParseError,
                  fmt::format("feature store line {}: missing tab", n + 1));
    }
    store.Add(std::string(line.substr(0, tab)),
              ParseDoubleList(line.substr(tab + 1), ',', "feature value"));
  }
  return store;
}

void FeatureStore::Save(const std::string& path) const { WriteFile(path, Serialize()); }

FeatureStore FeatureStore::Load(const std::string& path,
                                const std::vector<std::string>& expected) {
  return Parse(ReadFile(path), expected);
}

}  // namespace cvd
