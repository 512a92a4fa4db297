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

#include "cvd/error.h"

namespace cvd {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedContainer: return "MalformedContainer";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kEmptyClip: return "EmptyClip";
    case ErrorCode::kClipTooShort: return "ClipTooShort";
    case ErrorCode::kDegenerateSilence: return "DegenerateSilence";
    case ErrorCode::kSegmentOutOfRange: return "SegmentOutOfRange";
    case ErrorCode::kInvalidCutoff: return "InvalidCutoff";
    case ErrorCode::kEmptyEnvelope: return "EmptyEnvelope";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kTooFewFrames: return "TooFewFrames";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kMissingClip: return "MissingClip";
    case ErrorCode::kDuplicateClip: return "DuplicateClip";
    case ErrorCode::kEmptyDirectory: return "EmptyDirectory";
    case ErrorCode::kDuplicateClipId: return "DuplicateClipId";
    case ErrorCode::kInsufficientClips: return "InsufficientClips";
    case ErrorCode::kNoPairedUtterances: return "NoPairedUtterances";
    case ErrorCode::kStratumTooSmall: return "StratumTooSmall";
    case ErrorCode::kSplitMissing: return "SplitMissing";
    case ErrorCode::kZeroPowerSignal: return "ZeroPowerSignal";
    case ErrorCode::kEncoderUnavailable: return "EncoderUnavailable";
    case ErrorCode::kEncoderFailed: return "EncoderFailed";
    case ErrorCode::kSingleClassData: return "SingleClassData";
    case ErrorCode::kNonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::kSingleClassLabels: return "SingleClassLabels";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace cvd
