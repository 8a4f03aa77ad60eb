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

#ifndef SVS_TESTS_MODEL_UTIL_H_
#define SVS_TESTS_MODEL_UTIL_H_

#include "svs/acoustic/config.h"
#include "svs/acoustic/model.h"
#include "svs/score/score.h"

namespace svs::testing {

// A few-thousand-parameter configuration for fast unit tests.
inline ModelConfig TinyConfig(int64_t dim = 8) {
  ModelConfig c;
  c.vocab_size = 12;
  c.hidden_dim = dim;
  c.dropout = 0.0;
  c.predictor_dropout = 0.0;
  c.phoneme_encoder_blocks = 1;
  c.heads = 2;
  c.filter_dim = 2 * dim;
  c.max_note_frames = 64;
  c.duration_filter = dim;
  c.pitch_filter = dim;
  c.energy_filter = dim;
  c.frame_prior_layers = 1;
  c.latent_dim = 4;
  c.spec_bins = 9;
  c.posterior_hidden = dim;
  c.posterior_layers = 2;
  c.flow_couplings = 2;
  c.flow_hidden = dim;
  c.flow_layers = 2;
  c.decoder_upsample_factors = {4, 4};
  c.decoder_channels = 16;
  c.discriminator_channels = 4;
  c.semantic.n_fft_blocks = 1;
  c.semantic.input_dim = 12;
  c.semantic.model_dim = dim;
  c.semantic.hidden_dim = dim;
  c.semantic.filter_dim = 2 * dim;
  c.semantic.dropout = 0.0;
  return c;
}

inline QuantizerSpec TinyEnergyQuantizer() { return QuantizerSpec{256, -6.0, 3.0}; }

// A two-item batch of random scores; item 1 is shorter than item 0.
inline ModelInputs RandomInputs(const ModelConfig& c, int64_t n0 = 6, int64_t n1 = 4,
                                torch::Dtype dtype = torch::kFloat) {
  const int64_t n = std::max(n0, n1);
  ModelInputs in;
  auto& s = in.score;
  s.phoneme_ids = torch::randint(3, c.vocab_size, {2, n}, torch::kLong);
  s.note_pitch_ids = torch::randint(55, 75, {2, n}, torch::kLong);
  s.note_frames = torch::randint(2, 8, {2, n}, torch::kLong);
  s.slur_ids = torch::randint(0, 2, {2, n}, torch::kLong);
  s.note_lf0 = torch::log(440.0 * torch::pow(2.0, (s.note_pitch_ids.to(torch::kDouble) - 69) / 12))
                   .to(dtype);
  s.phoneme_mask = torch::ones({2, n}, torch::kBool);
  s.phoneme_mask[1].slice(0, n1).fill_(false);
  s.phoneme_ids.masked_fill_(~s.phoneme_mask, 0);
  s.note_frames.masked_fill_(~s.phoneme_mask, 0);
  s.note_lf0.masked_fill_(~s.phoneme_mask, 0);
  const int64_t w = 3;
  in.word_vectors = torch::randn({2, w, c.semantic.input_dim}, dtype);
  in.word_mask = torch::ones({2, w}, torch::kBool);
  in.source_index = torch::clamp(torch::div(torch::arange(n, torch::kLong), 2, "floor"), 0, w - 1)
                        .unsqueeze(0)
                        .repeat({2, 1});
  in.source_index.masked_fill_(~s.phoneme_mask, -1);
  return in;
}

}  // namespace svs::testing

#endif  // SVS_TESTS_MODEL_UTIL_H_
