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

#include "svs/acoustic/config.h"

#include "svs/base/error.h"

namespace svs {

int64_t ModelConfig::hop_length() const {
  int64_t p = 1;
  for (int64_t f : decoder_upsample_factors) p *= f;
  return p;
}

void ModelConfig::Validate(int64_t hop) const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::kConfigInvalid, what);
  };
  require(vocab_size > 3, "vocab_size must cover <pad>, SP, AP and phonemes");
  for (int64_t v : {hidden_dim, heads, filter_dim, fft_kernel, n_pitch_ids,
                    max_note_frames, n_slur, duration_layers, duration_filter,
                    duration_kernel, pitch_layers, pitch_filter, pitch_kernel,
                    energy_layers, energy_filter, energy_kernel, n_energy_bins,
                    n_pitch_bins, frame_prior_kernel, latent_dim, spec_bins,
                    posterior_hidden, posterior_layers, posterior_kernel,
                    flow_hidden, flow_layers, flow_kernel, decoder_channels,
                    decoder_resblock_kernel, discriminator_channels}) {
    require(v > 0, "model dimensions must be positive");
  }
  require(phoneme_encoder_blocks >= 0 && frame_prior_layers >= 0 &&
              flow_couplings >= 0 && scale_discriminators >= 0,
          "layer counts must be non-negative");
  require(hidden_dim % heads == 0, "hidden_dim not divisible by heads");
  require(dropout >= 0 && dropout < 1, "dropout outside [0, 1)");
  require(predictor_dropout >= 0 && predictor_dropout < 1, "predictor_dropout outside [0, 1)");
  require(!decoder_upsample_factors.empty(), "decoder needs upsample factors");
  for (int64_t f : decoder_upsample_factors) {
    require(f > 0 && f % 2 == 0, "upsample factors must be positive and even");
  }
  require(decoder_channels >> decoder_upsample_factors.size() > 0,
          "decoder_channels too small for the number of upsample stages");
  require(hop_length() == hop, "product of decoder upsample factors (" +
                                   std::to_string(hop_length()) +
                                   ") must equal hop length (" +
                                   std::to_string(hop) + ")");
  require(decoder_harmonics >= 0 && sample_rate > 0, "bad harmonic source settings");
  require(num_sub_discriminators() > 0, "need at least one discriminator");
  require(semantic.hidden_dim == hidden_dim,
          "semantic hidden_dim must equal model hidden_dim");
  semantic.Validate();
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{
      {"vocab_size", c.vocab_size},
      {"hidden_dim", c.hidden_dim},
      {"dropout", c.dropout},
      {"predictor_dropout", c.predictor_dropout},
      {"phoneme_encoder_blocks", c.phoneme_encoder_blocks},
      {"heads", c.heads},
      {"filter_dim", c.filter_dim},
      {"fft_kernel", c.fft_kernel},
      {"n_pitch_ids", c.n_pitch_ids},
      {"max_note_frames", c.max_note_frames},
      {"n_slur", c.n_slur},
      {"duration_layers", c.duration_layers},
      {"duration_filter", c.duration_filter},
      {"duration_kernel", c.duration_kernel},
      {"pitch_layers", c.pitch_layers},
      {"pitch_filter", c.pitch_filter},
      {"pitch_kernel", c.pitch_kernel},
      {"use_energy", c.use_energy},
      {"energy_layers", c.energy_layers},
      {"energy_filter", c.energy_filter},
      {"energy_kernel", c.energy_kernel},
      {"n_energy_bins", c.n_energy_bins},
      {"n_pitch_bins", c.n_pitch_bins},
      {"frame_prior_layers", c.frame_prior_layers},
      {"frame_prior_kernel", c.frame_prior_kernel},
      {"latent_dim", c.latent_dim},
      {"spec_bins", c.spec_bins},
      {"posterior_hidden", c.posterior_hidden},
      {"posterior_layers", c.posterior_layers},
      {"posterior_kernel", c.posterior_kernel},
      {"flow_couplings", c.flow_couplings},
      {"flow_hidden", c.flow_hidden},
      {"flow_layers", c.flow_layers},
      {"flow_kernel", c.flow_kernel},
      {"decoder_upsample_factors", c.decoder_upsample_factors},
      {"decoder_channels", c.decoder_channels},
      {"decoder_resblock_kernel", c.decoder_resblock_kernel},
      {"decoder_dilations", c.decoder_dilations},
      {"decoder_harmonics", c.decoder_harmonics},
      {"sample_rate", c.sample_rate},
      {"discriminator_periods", c.discriminator_periods},
      {"scale_discriminators", c.scale_discriminators},
      {"discriminator_channels", c.discriminator_channels},
      {"semantic", c.semantic}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
#define SVS_READ(field) c.field = j.value(#field, c.field)
  SVS_READ(vocab_size);
  SVS_READ(hidden_dim);
  SVS_READ(dropout);
  SVS_READ(predictor_dropout);
  SVS_READ(phoneme_encoder_blocks);
  SVS_READ(heads);
  SVS_READ(filter_dim);
  SVS_READ(fft_kernel);
  SVS_READ(n_pitch_ids);
  SVS_READ(max_note_frames);
  SVS_READ(n_slur);
  SVS_READ(duration_layers);
  SVS_READ(duration_filter);
  SVS_READ(duration_kernel);
  SVS_READ(pitch_layers);
  SVS_READ(pitch_filter);
  SVS_READ(pitch_kernel);
  SVS_READ(use_energy);
  SVS_READ(energy_layers);
  SVS_READ(energy_filter);
  SVS_READ(energy_kernel);
  SVS_READ(n_energy_bins);
  SVS_READ(n_pitch_bins);
  SVS_READ(frame_prior_layers);
  SVS_READ(frame_prior_kernel);
  SVS_READ(latent_dim);
  SVS_READ(spec_bins);
  SVS_READ(posterior_hidden);
  SVS_READ(posterior_layers);
  SVS_READ(posterior_kernel);
  SVS_READ(flow_couplings);
  SVS_READ(flow_hidden);
  SVS_READ(flow_layers);
  SVS_READ(flow_kernel);
  SVS_READ(decoder_upsample_factors);
  SVS_READ(decoder_channels);
  SVS_READ(decoder_resblock_kernel);
  SVS_READ(decoder_dilations);
  SVS_READ(decoder_harmonics);
  SVS_READ(sample_rate);
  SVS_READ(discriminator_periods);
  SVS_READ(scale_discriminators);
  SVS_READ(discriminator_channels);
#undef SVS_READ
  if (j.contains("semantic")) c.semantic = j.at("semantic").get<SemanticEncoderConfig>();
}

}  // namespace svs
