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

#include "svs/acoustic/prior.h"

#include "svs/base/error.h"

namespace svs {

torch::Tensor QuantizeTensor(const torch::Tensor& values, const QuantizerSpec& spec) {
  auto v = values.detach().to(torch::kDouble);
  auto pos = torch::floor((v - spec.lo) / (spec.hi - spec.lo) * spec.n_bins);
  pos = torch::nan_to_num(pos, 0.0, spec.n_bins - 1.0, 0.0);
  return pos.clamp(0, spec.n_bins - 1).to(torch::kLong);
}

torch::Tensor QuantizePitchTensor(const torch::Tensor& lf0, const PitchQuantizer& q) {
  auto bins = QuantizeTensor(lf0, q.spec);
  return torch::where(lf0.detach() > 0, bins, torch::full_like(bins, q.rest_bin()));
}

std::pair<torch::Tensor, torch::Tensor> LengthRegulate(const torch::Tensor& x,
                                                       const torch::Tensor& durations) {
  if (x.dim() != 3 || durations.sizes() != x.sizes().slice(0, 2)) {
    throw Error(ErrorCode::kShapeMismatch,
                "length regulator expects x [B, N, C] and durations [B, N]");
  }
  auto dur = durations.to(torch::kLong).clamp_min(0).cpu();
  auto lengths = dur.sum(1);
  const int64_t b = x.size(0);
  const int64_t t = b > 0 ? std::max<int64_t>(lengths.max().item<int64_t>(), 1) : 1;
  auto index = torch::full({b, t}, -1, torch::kLong);
  auto dacc = dur.accessor<int64_t, 2>();
  auto iacc = index.accessor<int64_t, 2>();
  for (int64_t i = 0; i < b; ++i) {
    int64_t f = 0;
    for (int64_t n = 0; n < dur.size(1); ++n) {
      for (int64_t k = 0; k < dacc[i][n]; ++k) iacc[i][f++] = n;
    }
  }
  return {nn::GatherRows(x, index.to(x.device())), lengths.to(x.device())};
}

torch::Tensor RatioToFrames(const torch::Tensor& ratio, const torch::Tensor& note_frames,
                            const torch::Tensor& mask) {
  auto frames = torch::floor(ratio.detach().to(torch::kDouble).clamp_min(0) *
                                 note_frames.to(torch::kDouble) +
                             0.5)
                    .to(torch::kLong)
                    .clamp_min(1);
  return frames * mask.to(torch::kLong);
}

PriorEncoderImpl::PriorEncoderImpl(const ModelConfig& config,
                                   const PitchQuantizer& pitch_quantizer,
                                   const QuantizerSpec& energy_quantizer)
    : config_(config),
      pitch_quantizer_(pitch_quantizer),
      energy_quantizer_(energy_quantizer) {
  const int64_t h = config.hidden_dim;
  if (pitch_quantizer.table_size() != config.n_pitch_bins ||
      energy_quantizer.n_bins != config.n_energy_bins) {
    throw Error(ErrorCode::kConfigInvalid, "quantizer sizes disagree with model config");
  }
  phoneme_embedding_ = register_module("phoneme_embedding",
                                       torch::nn::Embedding(config.vocab_size, h));
  note_pitch_embedding_ = register_module(
      "note_pitch_embedding", torch::nn::Embedding(config.n_pitch_ids, h));
  note_duration_embedding_ = register_module(
      "note_duration_embedding", torch::nn::Embedding(config.max_note_frames, h));
  slur_embedding_ = register_module("slur_embedding", torch::nn::Embedding(config.n_slur, h));
  for (auto* e : {&phoneme_embedding_, &note_pitch_embedding_, &note_duration_embedding_,
                  &slur_embedding_}) {
    torch::nn::init::normal_((*e)->weight, 0.0, std::pow(h, -0.5));
  }
  phoneme_encoder_ = register_module(
      "phoneme_encoder",
      nn::FftStack(config.phoneme_encoder_blocks, h, config.heads, config.filter_dim,
                   config.fft_kernel, config.dropout));
  duration_predictor_ = register_module(
      "duration_predictor",
      nn::ConvPredictor(h, config.duration_filter, config.duration_kernel,
                        config.duration_layers, config.predictor_dropout, 1));
  pitch_predictor_ = register_module(
      "pitch_predictor", nn::ConvPredictor(h, config.pitch_filter, config.pitch_kernel,
                                           config.pitch_layers, config.predictor_dropout, 1));
  // r starts at exactly 1: the initial prediction is the note pitch.
  torch::NoGradGuard no_grad;
  pitch_predictor_->projection()->weight.zero_();
  pitch_predictor_->projection()->bias.zero_();
  pitch_bin_embedding_ = register_module(
      "pitch_bin_embedding", torch::nn::Embedding(config.n_pitch_bins, h));
  torch::nn::init::normal_(pitch_bin_embedding_->weight, 0.0, std::pow(h, -0.5));
  if (config.use_energy) {
    energy_predictor_ = register_module(
        "energy_predictor",
        nn::ConvPredictor(h, config.energy_filter, config.energy_kernel,
                          config.energy_layers, config.predictor_dropout, 1));
    energy_bin_embedding_ = register_module(
        "energy_bin_embedding", torch::nn::Embedding(config.n_energy_bins, h));
    torch::nn::init::normal_(energy_bin_embedding_->weight, 0.0, std::pow(h, -0.5));
  }
  frame_prior_ = register_module(
      "frame_prior", nn::ConvPredictor(h, h, config.frame_prior_kernel,
                                       config.frame_prior_layers, config.dropout,
                                       2 * config.latent_dim));
}

PitchOutputs PriorEncoderImpl::PitchFromRatio(const torch::Tensor& ratio,
                                              const torch::Tensor& note_lf0_frames,
                                              const torch::Tensor& embed_lf0) {
  if (ratio.sizes() != note_lf0_frames.sizes()) {
    throw Error(ErrorCode::kShapeMismatch, "pitch ratio and note LF0 differ in shape");
  }
  PitchOutputs out;
  out.ratio = ratio;
  out.lf0_hat = ratio * note_lf0_frames;
  // LF0^ = r * LF0, elementwise. Rest frames (note LF0 0) stay at 0.
  TORCH_CHECK(torch::equal(out.lf0_hat.detach(), ratio.detach() * note_lf0_frames.detach()),
              "pitch ratio identity violated");
  const auto& source = embed_lf0.defined() ? embed_lf0 : out.lf0_hat;
  if (source.sizes() != ratio.sizes()) {
    throw Error(ErrorCode::kShapeMismatch, "pitch embedding source shape");
  }
  out.embedding = pitch_bin_embedding_->forward(QuantizePitchTensor(source, pitch_quantizer_));
  return out;
}

PitchOutputs PriorEncoderImpl::PredictPitch(const torch::Tensor& frame_hidden,
                                            const torch::Tensor& note_lf0_frames,
                                            const torch::Tensor& frame_mask,
                                            const torch::Tensor& embed_lf0) {
  if (frame_hidden.dim() != 3 || note_lf0_frames.sizes() != frame_hidden.sizes().slice(0, 2)) {
    throw Error(ErrorCode::kShapeMismatch, "pitch predictor input shapes");
  }
  auto delta = pitch_predictor_->forward(frame_hidden, frame_mask).squeeze(-1);
  auto out = PitchFromRatio(1.0 + delta, note_lf0_frames, embed_lf0);
  out.embedding = out.embedding * frame_mask.unsqueeze(-1).to(out.embedding.scalar_type());
  return out;
}

EnergyOutputs PriorEncoderImpl::PredictEnergy(const torch::Tensor& frame_hidden,
                                              const torch::Tensor& frame_mask,
                                              const torch::Tensor& embed_log_energy) {
  if (energy_predictor_.is_empty()) {
    throw Error(ErrorCode::kConfigInvalid, "model built without energy predictor");
  }
  if (frame_hidden.dim() != 3 || frame_mask.sizes() != frame_hidden.sizes().slice(0, 2)) {
    throw Error(ErrorCode::kShapeMismatch, "energy predictor input shapes");
  }
  EnergyOutputs out;
  out.log_energy = energy_predictor_->forward(frame_hidden, frame_mask).squeeze(-1);
  const auto& source = embed_log_energy.defined() ? embed_log_energy : out.log_energy;
  if (source.sizes() != out.log_energy.sizes()) {
    throw Error(ErrorCode::kShapeMismatch, "energy embedding source shape");
  }
  out.embedding = energy_bin_embedding_->forward(QuantizeTensor(source, energy_quantizer_)) *
                  frame_mask.unsqueeze(-1).to(frame_hidden.scalar_type());
  return out;
}

PriorOutputs PriorEncoderImpl::forward(const PriorInputs& in, const torch::Tensor& sem_hidden,
                                       const PriorTargets& targets) {
  const auto& mask = in.phoneme_mask;
  if (in.phoneme_ids.dim() != 2 || mask.sizes() != in.phoneme_ids.sizes() ||
      in.note_pitch_ids.sizes() != mask.sizes() || in.note_frames.sizes() != mask.sizes() ||
      in.slur_ids.sizes() != mask.sizes() || in.note_lf0.sizes() != mask.sizes()) {
    throw Error(ErrorCode::kShapeMismatch, "score tensors must share [B, N]");
  }
  PriorOutputs out;
  auto keep = mask.unsqueeze(-1).to(in.note_lf0.scalar_type());
  auto emb = phoneme_embedding_->forward(in.phoneme_ids) +
             note_pitch_embedding_->forward(in.note_pitch_ids.clamp(0, config_.n_pitch_ids - 1)) +
             note_duration_embedding_->forward(
                 in.note_frames.clamp(0, config_.max_note_frames - 1)) +
             slur_embedding_->forward(in.slur_ids.clamp(0, config_.n_slur - 1));
  auto h = phoneme_encoder_->forward(emb * keep, mask);
  if (sem_hidden.defined()) {
    if (sem_hidden.sizes() != h.sizes()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "semantic hidden " + c10::str(sem_hidden.sizes()) +
                      " does not match phoneme hidden " + c10::str(h.sizes()));
    }
    h = h + sem_hidden * keep;
  }
  out.phoneme_hidden = h;

  out.duration_ratio = duration_predictor_->forward(h.detach(), mask).squeeze(-1);
  out.pred_durations = RatioToFrames(out.duration_ratio, in.note_frames, mask);
  if (targets.durations.defined()) {
    if (targets.durations.sizes() != mask.sizes()) {
      throw Error(ErrorCode::kShapeMismatch, "duration targets must be [B, N]");
    }
    out.durations = targets.durations.to(torch::kLong) * mask.to(torch::kLong);
  } else {
    out.durations = out.pred_durations;
  }
  std::tie(out.frame_hidden, out.frame_lengths) = LengthRegulate(h, out.durations);
  out.frame_mask = nn::SequenceMask(out.frame_lengths, out.frame_hidden.size(1));
  out.note_lf0_frames =
      LengthRegulate(in.note_lf0.unsqueeze(-1), out.durations).first.squeeze(-1);

  const bool tf = targets.teacher_forcing;
  auto frame_sizes = out.frame_mask.sizes();
  if (tf && targets.lf0.defined() && targets.lf0.sizes() != frame_sizes) {
    throw Error(ErrorCode::kShapeMismatch, "LF0 targets " + c10::str(targets.lf0.sizes()) +
                                               " vs frames " + c10::str(frame_sizes));
  }
  auto pitch = PredictPitch(out.frame_hidden, out.note_lf0_frames, out.frame_mask,
                            tf ? targets.lf0 : torch::Tensor());
  out.pred_ratio = pitch.ratio;
  out.pred_lf0_hat = pitch.lf0_hat;
  auto x = out.frame_hidden + pitch.embedding;
  if (config_.use_energy) {
    if (tf && targets.log_energy.defined() && targets.log_energy.sizes() != frame_sizes) {
      throw Error(ErrorCode::kShapeMismatch, "energy targets do not match frames");
    }
    auto energy = PredictEnergy(out.frame_hidden, out.frame_mask,
                                tf ? targets.log_energy : torch::Tensor());
    out.pred_log_energy = energy.log_energy;
    x = x + energy.embedding;
  }
  auto stats = frame_prior_->forward(x, out.frame_mask).transpose(1, 2);
  out.prior_mean = stats.slice(1, 0, config_.latent_dim);
  out.prior_logstd = stats.slice(1, config_.latent_dim, 2 * config_.latent_dim);
  return out;
}

}  // namespace svs
