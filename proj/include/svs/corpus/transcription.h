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

#ifndef SVS_CORPUS_TRANSCRIPTION_H_
#define SVS_CORPUS_TRANSCRIPTION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svs/base/error.h"
#include "svs/corpus/lexicon.h"
#include "svs/corpus/utterance.h"

namespace svs {

// Opencpop transcription line, seven '|'-separated fields:
//
//   id|text|phonemes|notes|note_durations|phoneme_durations|slurs
//
// text is the lyric without separators; the next five fields are
// space-separated and parallel. Notes are scientific pitch names with an
// optional enharmonic alias ("C4", "D#4/Eb4") or "rest".
Utterance ParseTranscription(std::string_view line, const PhonemeDict& dict);

std::string SerializeTranscription(const Utterance& utt);

// "D#4/Eb4" -> 63, "rest" -> kRestPitch. Throws kMalformedLine.
int NoteNameToMidi(std::string_view name);

// 63 -> "D#4/Eb4", kRestPitch -> "rest".
std::string MidiToNoteName(int midi);

struct TranscriptionEntry {
  int line_number = 0;
  std::optional<Utterance> utterance;
  std::optional<Error> error;
};

// Parses every non-empty line of a transcription file; each line yields an
// utterance or the typed error raised for it.
std::vector<TranscriptionEntry> LoadTranscriptions(const std::string& path,
                                                   const PhonemeDict& dict);

}  // namespace svs

#endif  // SVS_CORPUS_TRANSCRIPTION_H_
