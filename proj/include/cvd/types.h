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

#ifndef CVD_TYPES_H_
#define CVD_TYPES_H_

#include <string>
#include <string_view>
#include <vector>

namespace cvd {

enum class FeatureFamily { kPerceptual, kSpectral, kLearned };
enum class TaskKind { kSingleClass, kMultiClass };
enum class ClassifierKind { kLinear, kForest };

std::string_view ToString(FeatureFamily family);
std::string_view ToString(TaskKind task);
std::string_view ToString(ClassifierKind kind);

// Inverses of ToString; throw Error(kParseError) on unknown names.
FeatureFamily ParseFeatureFamily(std::string_view text);
TaskKind ParseTaskKind(std::string_view text);
ClassifierKind ParseClassifierKind(std::string_view text);

// A clip's feature values tagged with the family that produced them.
struct FeatureVector {
  FeatureFamily family = FeatureFamily::kPerceptual;
  std::vector<double> values;
};

// "L" or "NL", as in the report tables.
std::string_view ClassifierTag(ClassifierKind kind);

}  // namespace cvd

#endif  // CVD_TYPES_H_
