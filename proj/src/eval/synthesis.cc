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

#include "svs/eval/synthesis.h"

#include "svs/base/error.h"
#include "svs/training/trainer.h"

namespace svs {

SynthesisEngine::SynthesisEngine(const std::string& checkpoint, const std::string& lexicon_dir,
                                 const RunConfig* runtime) {
  auto meta = ReadCheckpointInfo(checkpoint);
  const RunConfig& config = runtime != nullptr ? *runtime : meta.config;
  model_ = Synthesizer(config.model, config.pitch_quantizer, config.energy_quantizer);
  info_ = LoadCheckpoint(checkpoint, config, model_);
  info_.config = config;
  model_->eval();
  frontend_ = TextFrontend::Load(lexicon_dir, config.vocabulary);
  if (config.model.semantic.variant != SemanticVariant::kOff) {
    try {
      provider_ = MakeProvider(config.provider);
    } catch (const Error& e) {
      provider_error_ = e.what();
    }
  }
}

SynthesisResult SynthesisEngine::Synthesize(const Utterance& utt, uint64_t seed) const {
  const auto& cfg = info_.config;
  torch::Tensor vectors;
  if (cfg.model.semantic.variant == SemanticVariant::kOff) {
    vectors = torch::zeros({static_cast<int64_t>(utt.text.size()), cfg.model.semantic.input_dim});
  } else {
    if (!provider_) throw Error(ErrorCode::kProviderUnavailable, provider_error_);
    vectors = EmbedWords(utt.text, *provider_).vectors;
  }
  return Synthesize(utt, vectors, seed);
}

SynthesisResult SynthesisEngine::Synthesize(const Utterance& utt,
                                            const torch::Tensor& word_vectors,
                                            uint64_t seed) const {
  const auto& cfg = info_.config;
  auto item = MakeScoreItem(utt, frontend_, cfg.features, word_vectors);
  auto in = CollateInputs({&item}, cfg.model.semantic.input_dim);

  std::lock_guard<std::mutex> lock(mu_);
  torch::NoGradGuard no_grad;
  torch::manual_seed(seed);
  auto out = model_->Infer(in, cfg.train.noise_scale);

  SynthesisResult r;
  const int64_t n = static_cast<int64_t>(utt.size());
  auto durations = out.prior.durations[0].slice(0, 0, n).contiguous();
  r.durations.assign(durations.data_ptr<int64_t>(), durations.data_ptr<int64_t>() + n);
  const int64_t frames = out.prior.frame_lengths[0].item<int64_t>();
  r.lf0_hat = out.prior.pred_lf0_hat[0].slice(0, 0, frames).to(torch::kFloat).contiguous();

  // Decoder frame t covers input samples from t * hop + offset; shift so the
  // output lines up with the analysis frames of a recording, keeping the
  // length at frames * hop.
  const int64_t samples = out.sample_lengths[0].item<int64_t>();
  const int64_t offset = std::min(FrameAudioOffset(cfg.features.stft), samples);
  auto wave = out.waveform[0][0].slice(0, 0, samples - offset).to(torch::kFloat).contiguous();
  r.wave.sample_rate = cfg.features.sample_rate;
  r.wave.samples.assign(offset, 0.0f);
  r.wave.samples.insert(r.wave.samples.end(), wave.data_ptr<float>(),
                        wave.data_ptr<float>() + wave.numel());
  return r;
}

}  // namespace svs
