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

#include "svs/corpus/utterance.h"

#include <numeric>

#include "svs/base/error.h"

namespace svs {

double Utterance::TotalPhonemeSeconds() const {
  return std::accumulate(phoneme_durations_sec.begin(),
                         phoneme_durations_sec.end(), 0.0);
}

void Utterance::Validate() const {
  const size_t n = phonemes.size();
  if (note_pitches.size() != n || note_durations_sec.size() != n ||
      phoneme_durations_sec.size() != n || slur_flags.size() != n) {
    throw Error(ErrorCode::kLengthMismatch,
                id + ": parallel sequences differ in length");
  }
  if (n == 0) throw Error(ErrorCode::kMalformedLine, id + ": no phonemes");
  for (size_t i = 0; i < n; ++i) {
    if (!(note_durations_sec[i] > 0.0) || !(phoneme_durations_sec[i] > 0.0)) {
      throw Error(ErrorCode::kMalformedLine,
                  id + ": non-positive duration at position " +
                      std::to_string(i));
    }
    if (note_pitches[i] < 0 || note_pitches[i] > 127) {
      throw Error(ErrorCode::kMalformedLine,
                  id + ": pitch out of MIDI range at position " +
                      std::to_string(i));
    }
    if (IsRestPhoneme(phonemes[i]) && note_pitches[i] != kRestPitch) {
      throw Error(ErrorCode::kMalformedLine,
                  id + ": SP/AP without rest pitch at position " +
                      std::to_string(i));
    }
    if (slur_flags[i] != 0 && slur_flags[i] != 1) {
      throw Error(ErrorCode::kMalformedLine,
                  id + ": slur flag not 0/1 at position " + std::to_string(i));
    }
  }
}

}  // namespace svs
