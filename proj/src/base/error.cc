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

#include "svs/base/error.h"

namespace svs {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kUnknownPhoneme: return "UnknownPhoneme";
    case ErrorCode::kUnreadableAudio: return "UnreadableAudio";
    case ErrorCode::kUnsupportedRate: return "UnsupportedRate";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kPitchOutOfRange: return "PitchOutOfRange";
    case ErrorCode::kRestPitch: return "RestPitch";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kTokenizationMismatch: return "TokenizationMismatch";
    case ErrorCode::kAlignmentFailure: return "AlignmentFailure";
    case ErrorCode::kPlanMismatch: return "PlanMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kCheckpointWriteFailure: return "CheckpointWriteFailure";
    case ErrorCode::kConfigHashMismatch: return "ConfigHashMismatch";
    case ErrorCode::kEmptyOverlap: return "EmptyOverlap";
    case ErrorCode::kWriteFailure: return "WriteFailure";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace svs
