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

#ifndef SVS_ACOUSTIC_CONFIG_H_
#define SVS_ACOUSTIC_CONFIG_H_

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "svs/semantic/text_encoder.h"

namespace svs {

struct ModelConfig {
  int64_t vocab_size = 0;  // phoneme vocabulary incl. <pad>, SP, AP
  int64_t hidden_dim = 192;
  double dropout = 0.1;
  // Duration, pitch and energy predictors; they see ~100 phonemes in a
  // small run and memorize them at the encoder rate.
  double predictor_dropout = 0.5;

  // Phoneme encoder.
  int64_t phoneme_encoder_blocks = 6;
  int64_t heads = 2;
  int64_t filter_dim = 768;
  int64_t fft_kernel = 3;
  int64_t n_pitch_ids = 128;
  int64_t max_note_frames = 1024;  // note-duration embedding table size
  int64_t n_slur = 2;

  // Variance predictors.
  int64_t duration_layers = 3;
  int64_t duration_filter = 192;
  int64_t duration_kernel = 3;
  int64_t pitch_layers = 5;
  int64_t pitch_filter = 192;
  int64_t pitch_kernel = 5;
  bool use_energy = true;
  int64_t energy_layers = 2;
  int64_t energy_filter = 192;
  int64_t energy_kernel = 3;
  int64_t n_energy_bins = 256;
  int64_t n_pitch_bins = 257;  // PitchQuantizer::table_size()

  // Frame prior network.
  int64_t frame_prior_layers = 4;
  int64_t frame_prior_kernel = 3;

  int64_t latent_dim = 16;
  int64_t spec_bins = 513;

  // Posterior encoder (WaveNet).
  int64_t posterior_hidden = 96;
  int64_t posterior_layers = 8;
  int64_t posterior_kernel = 5;

  // Flow.
  int64_t flow_couplings = 4;
  int64_t flow_hidden = 96;
  int64_t flow_layers = 4;
  int64_t flow_kernel = 5;

  // Decoder (HiFi-GAN style).
  std::vector<int64_t> decoder_upsample_factors = {8, 8, 4};
  int64_t decoder_channels = 128;
  int64_t decoder_resblock_kernel = 3;
  std::vector<int64_t> decoder_dilations = {1, 3};
  // Harmonic excitation: sines at k * f0 (k = 1..N) injected into every
  // upsampling stage. 0 disables it (plain HiFi-GAN decoder).
  int64_t decoder_harmonics = 0;
  int64_t sample_rate = 24000;  // only used to turn f0 into phase

  // Discriminators: one period discriminator per entry plus scale ones.
  std::vector<int64_t> discriminator_periods = {3};
  int64_t scale_discriminators = 1;
  int64_t discriminator_channels = 16;

  SemanticEncoderConfig semantic;

  int64_t hop_length() const;
  int64_t num_sub_discriminators() const {
    return static_cast<int64_t>(discriminator_periods.size()) + scale_discriminators;
  }
  // Throws ConfigInvalid; hop_length must equal the product of upsample
  // factors.
  void Validate(int64_t hop_length) const;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

}  // namespace svs

#endif  // SVS_ACOUSTIC_CONFIG_H_
