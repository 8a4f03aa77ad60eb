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

#ifndef SVS_ACOUSTIC_MODEL_H_
#define SVS_ACOUSTIC_MODEL_H_

#include <torch/torch.h>

#include "svs/acoustic/config.h"
#include "svs/acoustic/decoder.h"
#include "svs/acoustic/posterior.h"
#include "svs/acoustic/prior.h"
#include "svs/semantic/text_encoder.h"

namespace svs {

struct ModelInputs {
  PriorInputs score;
  torch::Tensor word_vectors;  // [B, W, 768]
  torch::Tensor word_mask;     // [B, W] bool
  torch::Tensor source_index;  // [B, N] word per phoneme, -1 for rests/padding
};

struct GeneratorOutputs {
  torch::Tensor sem_hidden;  // [B, N, H]
  PriorOutputs prior;
  PosteriorOutputs posterior;
  torch::Tensor spec_mask;     // [B, 1, T]
  torch::Tensor z_p;           // flow(z)
  torch::Tensor logdet;        // [B]
  torch::Tensor slice_starts;  // [B] long, frame offsets of the decoded windows
  torch::Tensor y_hat;         // [B, 1, segment_frames * hop]
};

struct InferenceOutputs {
  PriorOutputs prior;
  torch::Tensor waveform;        // [B, 1, T * hop]
  torch::Tensor sample_lengths;  // [B]
};

// Random window of segment frames per item; items shorter than the window
// start at 0 and are zero padded. Returns (slices [B, C, seg], starts [B]).
std::pair<torch::Tensor, torch::Tensor> RandomSlices(const torch::Tensor& x,
                                                     const torch::Tensor& lengths,
                                                     int64_t segment);
// Slices x [B, C, S] at starts * scale with width segment * scale.
torch::Tensor SliceAt(const torch::Tensor& x, const torch::Tensor& starts, int64_t segment,
                      int64_t scale = 1);

// Hz where lf0 > 0 inside the mask, else 0. Detached.
torch::Tensor FrameF0(const torch::Tensor& lf0, const torch::Tensor& frame_mask);

// Generator side of the model: semantic encoder, prior encoder with the
// singing adaptor, posterior encoder, flow and waveform decoder.
class SynthesizerImpl : public torch::nn::Module {
 public:
  SynthesizerImpl(const ModelConfig& config, const PitchQuantizer& pitch_quantizer,
                  const QuantizerSpec& energy_quantizer);

  torch::Tensor SemanticHidden(const ModelInputs& in);

  // Training pass. linear_spec [B, bins, T] and targets.durations are
  // required; frame count T must equal the regulated length.
  GeneratorOutputs forward(const ModelInputs& in, const PriorTargets& targets,
                           const torch::Tensor& linear_spec, int64_t segment_frames);

  // Predicted durations, z_p ~ N(m_p, (noise_scale * s_p)^2), inverse flow
  // and decoder over the whole sequence.
  InferenceOutputs Infer(const ModelInputs& in, double noise_scale = 0.667);

  int64_t ParameterCount(bool include_semantic = true) const;

  const ModelConfig& config() const { return config_; }
  PriorEncoder& prior() { return prior_; }
  PosteriorEncoder& posterior() { return posterior_; }
  Flow& flow() { return flow_; }
  Decoder& decoder() { return decoder_; }
  SemanticEncoder& semantic() { return semantic_; }

 private:
  ModelConfig config_;
  SemanticEncoder semantic_{nullptr};
  PriorEncoder prior_{nullptr};
  PosteriorEncoder posterior_{nullptr};
  Flow flow_{nullptr};
  Decoder decoder_{nullptr};
};
TORCH_MODULE(Synthesizer);

}  // namespace svs

#endif  // SVS_ACOUSTIC_MODEL_H_
