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

#ifndef SVS_ACOUSTIC_PRIOR_H_
#define SVS_ACOUSTIC_PRIOR_H_

#include <torch/torch.h>

#include "svs/acoustic/config.h"
#include "svs/nn/layers.h"
#include "svs/score/score.h"

namespace svs {

// Vectorized Quantize(); bit-identical to the scalar version.
torch::Tensor QuantizeTensor(const torch::Tensor& values, const QuantizerSpec& spec);
// Vectorized PitchQuantizer::Quantize(): lf0 <= 0 maps to the rest bin.
torch::Tensor QuantizePitchTensor(const torch::Tensor& lf0, const PitchQuantizer& q);

// Padded phoneme-level score batch.
struct PriorInputs {
  torch::Tensor phoneme_ids;     // [B, N] long
  torch::Tensor note_pitch_ids;  // [B, N] long
  torch::Tensor note_frames;     // [B, N] long
  torch::Tensor slur_ids;        // [B, N] long
  torch::Tensor note_lf0;        // [B, N] float, 0 at rests
  torch::Tensor phoneme_mask;    // [B, N] bool
};

// Ground truth available during training. Any field may be undefined.
struct PriorTargets {
  torch::Tensor durations;   // [B, N] long frames; drives length regulation
  torch::Tensor lf0;         // [B, T], 0 where unvoiced
  torch::Tensor log_energy;  // [B, T]
  // Embed ground-truth pitch/energy instead of the predictions.
  bool teacher_forcing = false;
};

struct PriorOutputs {
  torch::Tensor phoneme_hidden;   // [B, N, H]
  torch::Tensor duration_ratio;   // [B, N] predicted frames / note frames
  torch::Tensor pred_durations;   // [B, N] long, rounded prediction
  torch::Tensor durations;        // [B, N] long, used for regulation
  torch::Tensor frame_mask;       // [B, T] bool
  torch::Tensor frame_lengths;    // [B] long
  torch::Tensor frame_hidden;     // [B, T, H]
  torch::Tensor note_lf0_frames;  // [B, T]
  torch::Tensor pred_ratio;       // [B, T] r
  torch::Tensor pred_lf0_hat;     // [B, T] r * note LF0
  torch::Tensor pred_log_energy;  // [B, T]; undefined without energy predictor
  torch::Tensor prior_mean;       // [B, latent, T]
  torch::Tensor prior_logstd;     // [B, latent, T]
};

// Repeats each row of x [B, N, C] durations[b, n] times. Returns the
// regulated sequence [B, T, C] (T = max total) and the per-item lengths.
std::pair<torch::Tensor, torch::Tensor> LengthRegulate(const torch::Tensor& x,
                                                       const torch::Tensor& durations);

// round-half-up(ratio * note_frames), at least 1; 0 on padding.
torch::Tensor RatioToFrames(const torch::Tensor& ratio, const torch::Tensor& note_frames,
                            const torch::Tensor& mask);

struct PitchOutputs {
  torch::Tensor ratio;      // r
  torch::Tensor lf0_hat;    // r * note LF0
  torch::Tensor embedding;  // [B, T, H]
};

struct EnergyOutputs {
  torch::Tensor log_energy;  // [B, T]
  torch::Tensor embedding;   // [B, T, H]
};

class PriorEncoderImpl : public torch::nn::Module {
 public:
  PriorEncoderImpl(const ModelConfig& config, const PitchQuantizer& pitch_quantizer,
                   const QuantizerSpec& energy_quantizer);

  // sem_hidden: [B, N, H] (zeros when the semantic path is off).
  PriorOutputs forward(const PriorInputs& in, const torch::Tensor& sem_hidden,
                       const PriorTargets& targets = {});

  // Frame-level singing adaptor pieces, exposed for tests.
  // embed_lf0, when defined, replaces lf0_hat as the embedding source.
  PitchOutputs PredictPitch(const torch::Tensor& frame_hidden,
                            const torch::Tensor& note_lf0_frames,
                            const torch::Tensor& frame_mask,
                            const torch::Tensor& embed_lf0 = {});
  PitchOutputs PitchFromRatio(const torch::Tensor& ratio,
                              const torch::Tensor& note_lf0_frames,
                              const torch::Tensor& embed_lf0 = {});
  EnergyOutputs PredictEnergy(const torch::Tensor& frame_hidden,
                              const torch::Tensor& frame_mask,
                              const torch::Tensor& embed_log_energy = {});

  nn::ConvPredictor& energy_predictor() { return energy_predictor_; }
  nn::ConvPredictor& pitch_predictor() { return pitch_predictor_; }
  nn::ConvPredictor& duration_predictor() { return duration_predictor_; }

 private:
  ModelConfig config_;
  PitchQuantizer pitch_quantizer_;
  QuantizerSpec energy_quantizer_;

  torch::nn::Embedding phoneme_embedding_{nullptr};
  torch::nn::Embedding note_pitch_embedding_{nullptr};
  torch::nn::Embedding note_duration_embedding_{nullptr};
  torch::nn::Embedding slur_embedding_{nullptr};
  nn::FftStack phoneme_encoder_{nullptr};
  nn::ConvPredictor duration_predictor_{nullptr};
  nn::ConvPredictor pitch_predictor_{nullptr};
  nn::ConvPredictor energy_predictor_{nullptr};
  torch::nn::Embedding pitch_bin_embedding_{nullptr};
  torch::nn::Embedding energy_bin_embedding_{nullptr};
  nn::ConvPredictor frame_prior_{nullptr};
};
TORCH_MODULE(PriorEncoder);

}  // namespace svs

#endif  // SVS_ACOUSTIC_PRIOR_H_
