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

#ifndef SVS_CORPUS_MANIFEST_H_
#define SVS_CORPUS_MANIFEST_H_

#include <string>
#include <vector>

#include "svs/corpus/utterance.h"

namespace svs {

// One JSON object per line:
//   {"id", "text", "phonemes", "note_pitches", "note_durations",
//    "phoneme_durations", "slurs", "audio", "sample_rate", "num_samples"}
// "audio" is relative to the manifest directory.
struct ManifestRecord {
  Utterance utterance;
  int sample_rate = 0;
  int64_t num_samples = 0;
};

void WriteManifest(const std::string& path,
                   const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> ReadManifest(const std::string& path);

}  // namespace svs

#endif  // SVS_CORPUS_MANIFEST_H_
