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

#ifndef CVD_ERROR_H_
#define CVD_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cvd {

// Every recoverable failure in the toolkit is reported as an Error carrying
// one of these codes. The CLI maps them to exit status 2.
enum class ErrorCode {
  kMalformedContainer,
  kUnsupportedEncoding,
  kEmptyClip,
  kClipTooShort,
  kDegenerateSilence,
  kSegmentOutOfRange,
  kInvalidCutoff,
  kEmptyEnvelope,
  kInsufficientData,
  kZeroVariance,
  kTooFewFrames,
  kDegenerateLabels,
  kDimensionMismatch,
  kNonFiniteValue,
  kMissingClip,
  kDuplicateClip,
  kEmptyDirectory,
  kDuplicateClipId,
  kInsufficientClips,
  kNoPairedUtterances,
  kStratumTooSmall,
  kSplitMissing,
  kZeroPowerSignal,
  kEncoderUnavailable,
  kEncoderFailed,
  kSingleClassData,
  kNonFiniteFeature,
  kSingleClassLabels,
  kLengthMismatch,
  kSchemaMismatch,
  kParseError,
  kIoError,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cvd

#endif  // CVD_ERROR_H_
