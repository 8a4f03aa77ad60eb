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

#include "svs/dsp/config.h"

#include "svs/base/error.h"

namespace svs {

void StftConfig::Validate() const {
  if (hop_length <= 0 || window_length <= 0 || fft_size <= 0 ||
      hop_length > window_length || window_length > fft_size) {
    throw Error(ErrorCode::kConfigInvalid,
                "need 0 < hop <= window <= fft, got hop=" +
                    std::to_string(hop_length) +
                    " window=" + std::to_string(window_length) +
                    " fft=" + std::to_string(fft_size));
  }
  if (window != "hann" && window != "hamming" && window != "rect") {
    throw Error(ErrorCode::kConfigInvalid, "unknown window " + window);
  }
}

void FeatureConfig::Validate() const {
  stft.Validate();
  if (sample_rate <= 0 || n_mels <= 0 || !(mel_floor > 0) ||
      !(energy_floor > 0)) {
    throw Error(ErrorCode::kConfigInvalid, "bad feature config");
  }
  const double nyquist = sample_rate / 2.0;
  if (!(f0.fmin > 0) || !(f0.fmin < f0.fmax) || f0.fmax >= nyquist) {
    throw Error(ErrorCode::kConfigInvalid, "need 0 < fmin < fmax < nyquist");
  }
}

void to_json(nlohmann::json& j, const StftConfig& c) {
  j = {{"fft_size", c.fft_size},
       {"window_length", c.window_length},
       {"hop_length", c.hop_length},
       {"window", c.window}};
}

void from_json(const nlohmann::json& j, StftConfig& c) {
  c.fft_size = j.value("fft_size", c.fft_size);
  c.window_length = j.value("window_length", c.window_length);
  c.hop_length = j.value("hop_length", c.hop_length);
  c.window = j.value("window", c.window);
}

void to_json(nlohmann::json& j, const F0Config& c) {
  j = {{"fmin", c.fmin},
       {"fmax", c.fmax},
       {"threshold", c.threshold},
       {"silence_rms", c.silence_rms}};
}

void from_json(const nlohmann::json& j, F0Config& c) {
  c.fmin = j.value("fmin", c.fmin);
  c.fmax = j.value("fmax", c.fmax);
  c.threshold = j.value("threshold", c.threshold);
  c.silence_rms = j.value("silence_rms", c.silence_rms);
}

void to_json(nlohmann::json& j, const FeatureConfig& c) {
  j = {{"sample_rate", c.sample_rate}, {"stft", c.stft},
       {"n_mels", c.n_mels},           {"mel_floor", c.mel_floor},
       {"energy_floor", c.energy_floor}, {"f0", c.f0}};
}

void from_json(const nlohmann::json& j, FeatureConfig& c) {
  c.sample_rate = j.value("sample_rate", c.sample_rate);
  if (j.contains("stft")) c.stft = j.at("stft").get<StftConfig>();
  c.n_mels = j.value("n_mels", c.n_mels);
  c.mel_floor = j.value("mel_floor", c.mel_floor);
  c.energy_floor = j.value("energy_floor", c.energy_floor);
  if (j.contains("f0")) c.f0 = j.at("f0").get<F0Config>();
}

}  // namespace svs
