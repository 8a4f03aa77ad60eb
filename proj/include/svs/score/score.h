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

#ifndef SVS_SCORE_SCORE_H_
#define SVS_SCORE_SCORE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "svs/corpus/lexicon.h"
#include "svs/corpus/utterance.h"
#include "svs/dsp/config.h"

namespace svs {

// f = 440 * 2^((p - 69) / 12). Throws Error(kPitchOutOfRange) outside
// [0, 127].
double PitchIdToFrequency(int pitch_id);

// Natural log of PitchIdToFrequency. Throws Error(kRestPitch) for the rest
// sentinel; callers mask rests.
double Lf0OfPitch(int pitch_id);

// Frame count of a note: floor((dur * sr - wl) / hl) + 1, at least 1. The
// duration is first rounded to whole samples.
int64_t FramesForDuration(double dur_sec, int sample_rate, int window_length,
                          int hop_length);

// Same rule on an integer sample count.
int64_t FramesForSamples(int64_t num_samples, int window_length,
                         int hop_length);

// Uniform scalar quantizer over [lo, hi].
struct QuantizerSpec {
  int n_bins = 256;
  double lo = 0.0;
  double hi = 1.0;

  void Validate() const;  // throws Error(kConfigInvalid)
  double bin_width() const { return (hi - lo) / n_bins; }
  bool operator==(const QuantizerSpec&) const = default;
};

// clamp(floor((v - lo) / (hi - lo) * n_bins), 0, n_bins - 1).
int Quantize(double value, const QuantizerSpec& spec);
// Bin centre.
double Dequantize(int bin, const QuantizerSpec& spec);

// Pitch embedding quantizer: uniform bins over LF0 of MIDI 30..100, plus one
// extra id (== spec.n_bins) for unvoiced or rest frames.
struct PitchQuantizer {
  QuantizerSpec spec;

  static PitchQuantizer Default();
  int table_size() const { return spec.n_bins + 1; }
  int rest_bin() const { return spec.n_bins; }
  // lf0 <= 0 maps to rest_bin().
  int Quantize(double lf0) const;
  bool operator==(const PitchQuantizer&) const = default;
};

// Phoneme symbol ids: 0 is padding, 1 SP, 2 AP, then the dictionary
// inventory in sorted order.
class PhonemeVocabulary {
 public:
  PhonemeVocabulary() = default;
  explicit PhonemeVocabulary(const std::vector<std::string>& symbols);

  static PhonemeVocabulary FromDict(const PhonemeDict& dict);

  // Throws Error(kUnknownPhoneme).
  int Id(const std::string& symbol) const;
  bool Contains(const std::string& symbol) const;
  int size() const { return static_cast<int>(symbols_.size()); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  static constexpr int kPadId = 0;

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, int> ids_;
};

struct ScoreFeatures {
  std::vector<int64_t> phoneme_ids;
  std::vector<int64_t> note_pitch_ids;
  std::vector<int64_t> note_frame_counts;
  std::vector<int64_t> slur_ids;
  std::vector<double> note_lf0;  // 0 at rests

  size_t size() const { return phoneme_ids.size(); }
};

ScoreFeatures BuildScoreFeatures(const Utterance& utt,
                                 const PhonemeVocabulary& vocab,
                                 int sample_rate, const StftConfig& stft);

// Ground-truth phoneme durations in frames. Each phoneme boundary is placed
// by applying the frame-count rule to the cumulative annotated time, the
// last boundary is pinned to total_frames, and every phoneme keeps at least
// one frame. Throws Error(kLengthMismatch) if total_frames < phoneme count.
std::vector<int64_t> PhonemeFrameDurations(const Utterance& utt,
                                           int sample_rate,
                                           const StftConfig& stft,
                                           int64_t total_frames);

void to_json(nlohmann::json& j, const QuantizerSpec& q);
void from_json(const nlohmann::json& j, QuantizerSpec& q);

}  // namespace svs

#endif  // SVS_SCORE_SCORE_H_
