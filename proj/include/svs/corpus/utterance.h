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

#ifndef SVS_CORPUS_UTTERANCE_H_
#define SVS_CORPUS_UTTERANCE_H_

#include <string>
#include <string_view>
#include <vector>

namespace svs {

// MIDI id 0 is never sung; SP/AP positions carry it so the pitch embedding
// table stays dense.
inline constexpr int kRestPitch = 0;
inline constexpr std::string_view kSilence = "SP";
inline constexpr std::string_view kAspirate = "AP";

inline bool IsRestPhoneme(std::string_view ph) {
  return ph == kSilence || ph == kAspirate;
}

// One annotated singing segment. All per-phoneme sequences are parallel.
struct Utterance {
  std::string id;
  std::vector<std::string> text;  // lyric characters, one UTF-8 code point each
  std::vector<std::string> phonemes;
  std::vector<int> note_pitches;
  std::vector<double> note_durations_sec;
  std::vector<double> phoneme_durations_sec;
  std::vector<int> slur_flags;
  std::string audio_path;

  size_t size() const { return phonemes.size(); }
  double TotalPhonemeSeconds() const;

  // Throws Error(kLengthMismatch / kMalformedLine) when an invariant fails.
  void Validate() const;

  bool operator==(const Utterance&) const = default;
};

}  // namespace svs

#endif  // SVS_CORPUS_UTTERANCE_H_
