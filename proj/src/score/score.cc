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

#include "svs/score/score.h"

#include <algorithm>
#include <cmath>

#include "svs/base/error.h"

namespace svs {

double PitchIdToFrequency(int pitch_id) {
  if (pitch_id < 0 || pitch_id > 127) {
    throw Error(ErrorCode::kPitchOutOfRange, std::to_string(pitch_id));
  }
  return 440.0 * std::exp2((pitch_id - 69) / 12.0);
}

double Lf0OfPitch(int pitch_id) {
  if (pitch_id == kRestPitch) {
    throw Error(ErrorCode::kRestPitch, "rest has no pitch");
  }
  return std::log(PitchIdToFrequency(pitch_id));
}

int64_t FramesForSamples(int64_t num_samples, int window_length,
                         int hop_length) {
  if (num_samples < window_length) return 1;
  return (num_samples - window_length) / hop_length + 1;
}

int64_t FramesForDuration(double dur_sec, int sample_rate, int window_length,
                          int hop_length) {
  const int64_t samples = std::llround(dur_sec * sample_rate);
  return FramesForSamples(samples, window_length, hop_length);
}

void QuantizerSpec::Validate() const {
  if (!(lo < hi) || n_bins < 2) {
    throw Error(ErrorCode::kConfigInvalid, "quantizer needs lo < hi, n_bins >= 2");
  }
}

int Quantize(double value, const QuantizerSpec& spec) {
  const double pos = std::floor((value - spec.lo) / (spec.hi - spec.lo) * spec.n_bins);
  if (!(pos >= 0.0)) return 0;  // also catches NaN
  if (pos >= spec.n_bins - 1) return spec.n_bins - 1;
  return static_cast<int>(pos);
}

double Dequantize(int bin, const QuantizerSpec& spec) {
  return spec.lo + (bin + 0.5) * spec.bin_width();
}

PitchQuantizer PitchQuantizer::Default() {
  return PitchQuantizer{QuantizerSpec{256, Lf0OfPitch(30), Lf0OfPitch(100)}};
}

int PitchQuantizer::Quantize(double lf0) const {
  if (!(lf0 > 0.0)) return rest_bin();
  return svs::Quantize(lf0, spec);
}

PhonemeVocabulary::PhonemeVocabulary(const std::vector<std::string>& symbols)
    : symbols_(symbols) {
  for (size_t i = 0; i < symbols_.size(); ++i) {
    ids_[symbols_[i]] = static_cast<int>(i);
  }
}

PhonemeVocabulary PhonemeVocabulary::FromDict(const PhonemeDict& dict) {
  std::vector<std::string> symbols = {"<pad>", std::string(kSilence),
                                      std::string(kAspirate)};
  for (const auto& ph : dict.Inventory()) {
    if (!IsRestPhoneme(ph)) symbols.push_back(ph);
  }
  return PhonemeVocabulary(symbols);
}

int PhonemeVocabulary::Id(const std::string& symbol) const {
  auto it = ids_.find(symbol);
  if (it == ids_.end() || it->second == kPadId) {
    throw Error(ErrorCode::kUnknownPhoneme, "'" + symbol + "'");
  }
  return it->second;
}

bool PhonemeVocabulary::Contains(const std::string& symbol) const {
  auto it = ids_.find(symbol);
  return it != ids_.end() && it->second != kPadId;
}

ScoreFeatures BuildScoreFeatures(const Utterance& utt,
                                 const PhonemeVocabulary& vocab,
                                 int sample_rate, const StftConfig& stft) {
  utt.Validate();
  ScoreFeatures f;
  for (size_t i = 0; i < utt.size(); ++i) {
    f.phoneme_ids.push_back(vocab.Id(utt.phonemes[i]));
    const int p = utt.note_pitches[i];
    f.note_pitch_ids.push_back(p);
    f.note_frame_counts.push_back(FramesForDuration(
        utt.note_durations_sec[i], sample_rate, stft.window_length,
        stft.hop_length));
    f.slur_ids.push_back(utt.slur_flags[i]);
    f.note_lf0.push_back(p == kRestPitch ? 0.0 : Lf0OfPitch(p));
  }
  return f;
}

std::vector<int64_t> PhonemeFrameDurations(const Utterance& utt,
                                           int sample_rate,
                                           const StftConfig& stft,
                                           int64_t total_frames) {
  const int64_t n = static_cast<int64_t>(utt.size());
  if (total_frames < n) {
    throw Error(ErrorCode::kLengthMismatch,
                utt.id + ": " + std::to_string(total_frames) +
                    " frames cannot hold " + std::to_string(n) + " phonemes");
  }
  // bounds[i] = frames completed by the end of phoneme i.
  std::vector<int64_t> bounds(n + 1, 0);
  double t = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    t += utt.phoneme_durations_sec[i];
    const int64_t samples = std::llround(t * sample_rate);
    bounds[i + 1] = samples < stft.window_length
                        ? 0
                        : (samples - stft.window_length) / stft.hop_length + 1;
  }
  bounds[n] = total_frames;
  for (int64_t i = 1; i < n; ++i) {
    bounds[i] = std::clamp(bounds[i], bounds[i - 1] + 1, total_frames - (n - i));
  }
  std::vector<int64_t> durations(n);
  for (int64_t i = 0; i < n; ++i) durations[i] = bounds[i + 1] - bounds[i];
  return durations;
}

void to_json(nlohmann::json& j, const QuantizerSpec& q) {
  j = {{"n_bins", q.n_bins}, {"lo", q.lo}, {"hi", q.hi}};
}

void from_json(const nlohmann::json& j, QuantizerSpec& q) {
  q.n_bins = j.at("n_bins").get<int>();
  q.lo = j.at("lo").get<double>();
  q.hi = j.at("hi").get<double>();
}

}  // namespace svs
