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

#include "svs/acoustic/model.h"

#include "svs/base/error.h"

namespace svs {

std::pair<torch::Tensor, torch::Tensor> RandomSlices(const torch::Tensor& x,
                                                     const torch::Tensor& lengths,
                                                     int64_t segment) {
  auto room = (lengths.to(torch::kLong) - segment + 1).clamp_min(1).to(torch::kDouble);
  auto starts = torch::floor(torch::rand({x.size(0)}, torch::kDouble) * room).to(torch::kLong);
  return {SliceAt(x, starts, segment), starts};
}

torch::Tensor SliceAt(const torch::Tensor& x, const torch::Tensor& starts, int64_t segment,
                      int64_t scale) {
  const int64_t width = segment * scale;
  std::vector<torch::Tensor> parts;
  auto s = starts.cpu();
  for (int64_t b = 0; b < x.size(0); ++b) {
    const int64_t begin = s[b].item<int64_t>() * scale;
    auto part = x[b].slice(-1, std::min(begin, x.size(-1)), std::min(begin + width, x.size(-1)));
    if (part.size(-1) < width) {
      part = torch::nn::functional::pad(
          part, torch::nn::functional::PadFuncOptions({0, width - part.size(-1)}));
    }
    parts.push_back(part);
  }
  return torch::stack(parts);
}

torch::Tensor FrameF0(const torch::Tensor& lf0, const torch::Tensor& frame_mask) {
  auto voiced = (lf0 > 0) & frame_mask;
  return torch::where(voiced, torch::exp(lf0.detach()), torch::zeros_like(lf0));
}

SynthesizerImpl::SynthesizerImpl(const ModelConfig& config,
                                 const PitchQuantizer& pitch_quantizer,
                                 const QuantizerSpec& energy_quantizer)
    : config_(config) {
  config_.Validate(config_.hop_length());
  if (config_.semantic.variant != SemanticVariant::kOff) {
    semantic_ = register_module("semantic", SemanticEncoder(config_.semantic));
  }
  prior_ = register_module("prior", PriorEncoder(config_, pitch_quantizer, energy_quantizer));
  posterior_ = register_module("posterior", PosteriorEncoder(config_));
  flow_ = register_module("flow", Flow(config_));
  decoder_ = register_module("decoder", Decoder(config_));
}

torch::Tensor SynthesizerImpl::SemanticHidden(const ModelInputs& in) {
  const auto& s = in.score;
  if (config_.semantic.variant == SemanticVariant::kOff || !in.word_vectors.defined()) {
    return torch::zeros({s.phoneme_ids.size(0), s.phoneme_ids.size(1), config_.hidden_dim},
                        s.note_lf0.options());
  }
  if (in.source_index.sizes() != s.phoneme_ids.sizes()) {
    throw Error(ErrorCode::kShapeMismatch, "semantic source index must be [B, N]");
  }
  return EncodeSemantics(semantic_, config_.semantic.variant, config_.hidden_dim,
                         in.word_vectors, in.word_mask, in.source_index, s.phoneme_mask);
}

GeneratorOutputs SynthesizerImpl::forward(const ModelInputs& in, const PriorTargets& targets,
                                          const torch::Tensor& linear_spec,
                                          int64_t segment_frames) {
  if (!targets.durations.defined()) {
    throw Error(ErrorCode::kShapeMismatch, "training pass needs duration targets");
  }
  GeneratorOutputs out;
  out.sem_hidden = SemanticHidden(in);
  out.prior = prior_->forward(in.score, out.sem_hidden, targets);
  const int64_t t = out.prior.frame_mask.size(1);
  if (linear_spec.dim() != 3 || linear_spec.size(2) != t) {
    throw Error(ErrorCode::kShapeMismatch,
                "spectrogram frames (" +
                    std::to_string(linear_spec.dim() == 3 ? linear_spec.size(2) : -1) +
                    ") differ from regulated frames (" + std::to_string(t) + ")");
  }
  out.spec_mask = out.prior.frame_mask.unsqueeze(1).to(linear_spec.scalar_type());
  out.posterior = posterior_->forward(linear_spec, out.spec_mask, /*sample=*/true);
  std::tie(out.z_p, out.logdet) = flow_->forward(out.posterior.z, out.spec_mask);
  auto [z_slice, starts] =
      RandomSlices(out.posterior.z, out.prior.frame_lengths, segment_frames);
  out.slice_starts = starts;
  torch::Tensor f0;
  if (config_.decoder_harmonics > 0) {
    const bool given = targets.teacher_forcing && targets.lf0.defined();
    f0 = SliceAt(FrameF0(given ? targets.lf0.to(out.prior.pred_lf0_hat.scalar_type())
                               : out.prior.pred_lf0_hat,
                         out.prior.frame_mask)
                     .unsqueeze(1),
                 starts, segment_frames)
             .squeeze(1);
  }
  out.y_hat = decoder_->forward(z_slice, f0);
  return out;
}

InferenceOutputs SynthesizerImpl::Infer(const ModelInputs& in, double noise_scale) {
  InferenceOutputs out;
  out.prior = prior_->forward(in.score, SemanticHidden(in));
  auto mask = out.prior.frame_mask.unsqueeze(1).to(out.prior.prior_mean.scalar_type());
  auto z_p = (out.prior.prior_mean + torch::randn_like(out.prior.prior_mean) *
                                         torch::exp(out.prior.prior_logstd) * noise_scale) *
             mask;
  auto z = flow_->inverse(z_p, mask);
  torch::Tensor f0;
  if (config_.decoder_harmonics > 0) f0 = FrameF0(out.prior.pred_lf0_hat, out.prior.frame_mask);
  out.waveform = decoder_->forward(z * mask, f0);
  out.sample_lengths = out.prior.frame_lengths * config_.hop_length();
  return out;
}

int64_t SynthesizerImpl::ParameterCount(bool include_semantic) const {
  int64_t n = 0;
  for (const auto& p : named_parameters()) {
    if (!include_semantic && p.key().rfind("semantic.", 0) == 0) continue;
    n += p.value().numel();
  }
  return n;
}

}  // namespace svs
