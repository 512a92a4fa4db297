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

#ifndef CVD_FEATURE_STORE_H_
#define CVD_FEATURE_STORE_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cvd/types.h"

namespace cvd {

// Column names of each family, in store order.
std::vector<std::string> FamilySchema(FeatureFamily family);
std::string SchemaHash(std::span<const std::string> schema);

// Per-clip feature rows of one family. On disk:
//   #features-v1 family=<tag> dim=<d> schema_hash=<hex>
//   #schema=<name1>,<name2>,...
//   clip_id<TAB>v1,...,vd
class FeatureStore {
 public:
  FeatureStore(FeatureFamily family, std::vector<std::string> schema);

  FeatureFamily family() const { return family_; }
  const std::vector<std::string>& schema() const { return schema_; }
  size_t dim() const { return schema_.size(); }
  size_t size() const { return clip_ids_.size(); }
  const std::vector<std::string>& clip_ids() const { return clip_ids_; }
  const std::vector<double>& row(size_t i) const { return rows_[i]; }

  // Throws DimensionMismatch, NonFiniteValue or DuplicateClip.
  void Add(const std::string& clip_id, std::vector<double> values);
  // Throws MissingClip.
  const std::vector<double>& Get(const std::string& clip_id) const;
  bool Contains(const std::string& clip_id) const;

  std::string Serialize() const;
  // Rejects files whose schema differs from `expected` (when non-empty) or
  // whose schema hash does not match the schema line.
  static FeatureStore Parse(const std::string& text,
                            const std::vector<std::string>& expected = {});
  void Save(const std::string& path) const;
  static FeatureStore Load(const std::string& path,
                           const std::vector<std::string>& expected = {});

 private:
  FeatureFamily family_;
  std::vector<std::string> schema_;
  std::vector<std::string> clip_ids_;
  std::vector<std::vector<double>> rows_;
  std::map<std::string, size_t> index_;
};

}  // namespace cvd

#endif  // CVD_FEATURE_STORE_H_
