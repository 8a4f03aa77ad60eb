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

#ifndef SVS_CORPUS_FIXTURE_H_
#define SVS_CORPUS_FIXTURE_H_

#include <cstdint>
#include <string>

namespace svs {

struct FixtureOptions {
  int num_utterances = 50;
  int sample_rate = 44100;
  uint64_t seed = 7;
  int min_words = 3;
  int max_words = 6;
};

// Writes a small Opencpop-layout corpus under `dir`:
//   segments/transcriptions.txt, segments/wavs/<id>.wav,
//   opencpop-strict.txt (pinyin -> phonemes), lexicon.txt (char -> pinyin).
// Audio is additive harmonic singing at the annotated note pitches with
// vibrato, per-vowel spectral envelopes, noise onsets for consonants,
// silence for SP and breath noise for AP. Deterministic in the seed.
void WriteSyntheticCorpus(const std::string& dir, const FixtureOptions& opts);

}  // namespace svs

#endif  // SVS_CORPUS_FIXTURE_H_
