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

#include "cvd/types.h"

#include "cvd/error.h"

namespace cvd {

std::string_view ToString(FeatureFamily family) {
  switch (family) {
    case FeatureFamily::kPerceptual: return "perceptual";
    case FeatureFamily::kSpectral: return "spectral";
    case FeatureFamily::kLearned: return "learned";
  }
  return "?";
}

std::string_view ToString(TaskKind task) {
  return task == TaskKind::kSingleClass ? "single" : "multi";
}

std::string_view ToString(ClassifierKind kind) {
  return kind == ClassifierKind::kLinear ? "linear" : "forest";
}

FeatureFamily ParseFeatureFamily(std::string_view text) {
  if (text == "perceptual") return FeatureFamily::kPerceptual;
  if (text == "spectral") return FeatureFamily::kSpectral;
  if (text == "learned") return FeatureFamily::kLearned;
  throw Error(ErrorCode::kParseError, "unknown feature family '" +
                                          std::string(text) + "'");
}

TaskKind ParseTaskKind(std::string_view text) {
  if (text == "single") return TaskKind::kSingleClass;
  if (text == "multi") return TaskKind::kMultiClass;
  throw Error(ErrorCode::kParseError, "unknown task '" + std::string(text) + "'");
}

ClassifierKind ParseClassifierKind(std::string_view text) {
  if (text == "linear") return ClassifierKind::kLinear;
  if (text == "forest") return ClassifierKind::kForest;
  throw Error(ErrorCode::kParseError,
              "unknown classifier '" + std::string(text) + "'");
}

std::string_view ClassifierTag(ClassifierKind kind) {
  return kind == ClassifierKind::kLinear ? "L" : "NL";
}

}  // namespace cvd
