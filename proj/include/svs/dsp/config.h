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

#ifndef SVS_DSP_CONFIG_H_
#define SVS_DSP_CONFIG_H_

#include <string>

#include "json.hpp"

namespace svs {

struct StftConfig {
  int fft_size = 1024;
  int window_length = 1024;
  int hop_length = 256;
  std::string window = "hann";

  // Throws Error(kConfigInvalid) unless 0 < hop <= window <= fft.
  void Validate() const;
  int num_bins() const { return fft_size / 2 + 1; }
};

struct F0Config {
  double fmin = 80.0;
  double fmax = 800.0;
  double threshold = 0.15;     // YIN cumulative-mean-normalized dip
  double silence_rms = 1e-3;   // frames quieter than this are unvoiced
};

struct FeatureConfig {
  int sample_rate = 24000;
  StftConfig stft;
  int n_mels = 80;
  double mel_floor = 1e-5;
  double energy_floor = 1e-5;  // log-energy floor
  F0Config f0;

  void Validate() const;
};

void to_json(nlohmann::json& j, const StftConfig& c);
void from_json(const nlohmann::json& j, StftConfig& c);
void to_json(nlohmann::json& j, const F0Config& c);
void from_json(const nlohmann::json& j, F0Config& c);
void to_json(nlohmann::json& j, const FeatureConfig& c);
void from_json(const nlohmann::json& j, FeatureConfig& c);

}  // namespace svs

#endif  // SVS_DSP_CONFIG_H_
