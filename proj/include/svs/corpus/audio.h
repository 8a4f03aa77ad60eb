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

#ifndef SVS_CORPUS_AUDIO_H_
#define SVS_CORPUS_AUDIO_H_

#include <span>
#include <string>
#include <vector>

namespace svs {

inline constexpr int kCanonicalSampleRate = 24000;

struct Waveform {
  std::vector<float> samples;  // mono, in [-1, 1]
  int sample_rate = kCanonicalSampleRate;

  double DurationSec() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Reads a RIFF/WAVE file (PCM 16/24/32-bit or IEEE float 32); channels are
// averaged to mono. Throws Error(kUnreadableAudio).
Waveform ReadWav(const std::string& path);

// Writes 16-bit PCM mono. Throws Error(kWriteFailure).
void WriteWav(const std::string& path, const Waveform& wave);

// Polyphase windowed-sinc (Kaiser) resampler for rational rate ratios.
class Resampler {
 public:
  // Throws Error(kUnsupportedRate) for non-positive rates or ratios whose
  // reduced numerator/denominator exceed kMaxFactor.
  Resampler(int source_rate, int target_rate, int zero_crossings = 32,
            double rolloff = 0.945, double kaiser_beta = 8.6);

  std::vector<float> Process(std::span<const float> input) const;

  int up() const { return up_; }
  int down() const { return down_; }

  static constexpr int kMaxFactor = 4096;

 private:
  int up_ = 1;
  int down_ = 1;
  int half_taps_ = 0;                    // taps on each side of the centre
  std::vector<std::vector<float>> bank_;  // [phase][2 * half_taps_]
};

// Loads a WAV file and converts it to target_rate; identity when the file is
// already at that rate. Output peak is clamped to 1.
Waveform IngestAudio(const std::string& path, int target_rate);

Waveform ResampleWaveform(const Waveform& wave, int target_rate);

}  // namespace svs

#endif  // SVS_CORPUS_AUDIO_H_
