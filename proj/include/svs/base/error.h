// Copyright (c) 2026 The svs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVS_BASE_ERROR_H_
#define SVS_BASE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace svs {

enum class ErrorCode {
  // corpus
  kMalformedLine,
  kLengthMismatch,
  kUnknownPhoneme,
  kUnreadableAudio,
  kUnsupportedRate,
  kInsufficientData,
  // dsp / score
  kConfigInvalid,
  kPitchOutOfRange,
  kRestPitch,
  // semantic
  kProviderUnavailable,
  kTokenizationMismatch,
  kAlignmentFailure,
  kPlanMismatch,
  // model / training / eval
  kShapeMismatch,
  kNonFiniteLoss,
  kCheckpointWriteFailure,
  kConfigHashMismatch,
  kEmptyOverlap,
  kWriteFailure,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace svs

#endif  // SVS_BASE_ERROR_H_
