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

#include "svs/training/run_config.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "svs/base/error.h"
#include "svs/base/hash.h"

namespace svs {

void OptimizerSchedule::Validate() const {
  if (!(lr0 > 0) || !(decay > 0 && decay <= 1) || !(beta1 >= 0 && beta1 < 1) ||
      !(beta2 >= 0 && beta2 < 1) || !(epsilon > 0) || weight_decay < 0) {
    throw Error(ErrorCode::kConfigInvalid, "invalid optimizer schedule");
  }
}

double OptimizerSchedule::LearningRate(int64_t epoch, int64_t step) const {
  return lr0 * std::pow(decay, static_cast<double>(decay_per_epoch ? epoch : step));
}

void to_json(nlohmann::json& j, const OptimizerSchedule& s) {
  j = {{"beta1", s.beta1},     {"beta2", s.beta2},
       {"epsilon", s.epsilon}, {"weight_decay", s.weight_decay},
       {"lr0", s.lr0},         {"decay", s.decay},
       {"decay_per_epoch", s.decay_per_epoch}};
}

void from_json(const nlohmann::json& j, OptimizerSchedule& s) {
  s.beta1 = j.value("beta1", s.beta1);
  s.beta2 = j.value("beta2", s.beta2);
  s.epsilon = j.value("epsilon", s.epsilon);
  s.weight_decay = j.value("weight_decay", s.weight_decay);
  s.lr0 = j.value("lr0", s.lr0);
  s.decay = j.value("decay", s.decay);
  s.decay_per_epoch = j.value("decay_per_epoch", s.decay_per_epoch);
}

void to_json(nlohmann::json& j, const TrainOptions& o) {
  j = {{"steps", o.steps},
       {"batch_size", o.batch_size},
       {"segment_frames", o.segment_frames},
       {"teacher_forcing_steps", o.teacher_forcing_steps},
       {"checkpoint_every", o.checkpoint_every},
       {"max_utterances", o.max_utterances},
       {"seed", o.seed},
       {"threads", o.threads},
       {"noise_scale", o.noise_scale}};
}

void from_json(const nlohmann::json& j, TrainOptions& o) {
  o.steps = j.value("steps", o.steps);
  o.batch_size = j.value("batch_size", o.batch_size);
  o.segment_frames = j.value("segment_frames", o.segment_frames);
  o.teacher_forcing_steps = j.value("teacher_forcing_steps", o.teacher_forcing_steps);
  o.checkpoint_every = j.value("checkpoint_every", o.checkpoint_every);
  o.max_utterances = j.value("max_utterances", o.max_utterances);
  o.seed = j.value("seed", o.seed);
  o.threads = j.value("threads", o.threads);
  o.noise_scale = j.value("noise_scale", o.noise_scale);
}

void RunConfig::Validate() const {
  features.Validate();
  optimizer.Validate();
  pitch_quantizer.spec.Validate();
  energy_quantizer.Validate();
  if (model.sample_rate != features.sample_rate) {
    throw Error(ErrorCode::kConfigInvalid, "model sample_rate must equal the feature rate");
  }
  if (model.spec_bins != features.stft.num_bins()) {
    throw Error(ErrorCode::kConfigInvalid, "model spec_bins must equal fft_size / 2 + 1");
  }
  if (model.n_energy_bins != energy_quantizer.n_bins ||
      model.n_pitch_bins != pitch_quantizer.table_size()) {
    throw Error(ErrorCode::kConfigInvalid, "quantizer sizes disagree with model config");
  }
  if (!vocabulary.empty() && model.vocab_size != static_cast<int64_t>(vocabulary.size())) {
    throw Error(ErrorCode::kConfigInvalid, "model vocab_size disagrees with vocabulary");
  }
  if (train.steps < 0 || train.batch_size < 1 || train.segment_frames < 1 ||
      train.threads < 1 || train.checkpoint_every < 0) {
    throw Error(ErrorCode::kConfigInvalid, "invalid training options");
  }
  if (model.vocab_size > 0) model.Validate(features.stft.hop_length);
}

std::string RunConfig::Hash() const {
  nlohmann::json j = {{"features", features},
                      {"model", model},
                      {"pitch_quantizer", pitch_quantizer.spec},
                      {"energy_quantizer", energy_quantizer},
                      {"vocabulary", vocabulary}};
  return HexDigest(Fnv1a64(j.dump()));
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = {{"features", c.features},
       {"model", c.model},
       {"optimizer", c.optimizer},
       {"loss_weights", c.loss_weights},
       {"train", c.train},
       {"provider", c.provider},
       {"pitch_quantizer", c.pitch_quantizer.spec},
       {"energy_quantizer", c.energy_quantizer},
       {"vocabulary", c.vocabulary}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  if (j.contains("features")) c.features = j.at("features").get<FeatureConfig>();
  if (j.contains("model")) c.model = j.at("model").get<ModelConfig>();
  if (j.contains("optimizer")) c.optimizer = j.at("optimizer").get<OptimizerSchedule>();
  if (j.contains("loss_weights")) c.loss_weights = j.at("loss_weights").get<LossWeights>();
  if (j.contains("train")) c.train = j.at("train").get<TrainOptions>();
  if (j.contains("provider")) c.provider = j.at("provider").get<ProviderConfig>();
  if (j.contains("pitch_quantizer")) {
    c.pitch_quantizer.spec = j.at("pitch_quantizer").get<QuantizerSpec>();
  }
  if (j.contains("energy_quantizer")) {
    c.energy_quantizer = j.at("energy_quantizer").get<QuantizerSpec>();
  }
  if (j.contains("vocabulary")) c.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
}

RunConfig RunConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot open config " + path);
  RunConfig c;
  try {
    c = nlohmann::json::parse(in).get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid, path + ": " + e.what());
  }
  c.Validate();
  return c;
}

void RunConfig::Save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out << nlohmann::json(*this).dump(2) << "\n";
    if (!out) throw Error(ErrorCode::kWriteFailure, "cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kWriteFailure, "cannot rename to " + path);
}

RunConfig DeskConfig() {
  RunConfig c;
  c.optimizer.lr0 = 2e-4;
  // Project the 768-dim word vectors down before the FFT blocks; at full
  // width the semantic encoder alone costs more than the rest of a step.
  c.model.semantic.model_dim = 192;
  // A GAN decoder trained from scratch needs far more steps than a desk run
  // to learn periodicity; the sine source gives it the pitch directly.
  c.model.decoder_harmonics = 8;
  c.train.teacher_forcing_steps = 10000;
  return c;
}

std::vector<std::string> VariantNames() {
  return {"proposed", "no-energy", "no-sem", "reversed-sem"};
}

void ApplyVariant(RunConfig* config, const std::string& variant) {
  config->model.use_energy = true;
  config->model.semantic.variant = SemanticVariant::kStandard;
  if (variant == "proposed") return;
  if (variant == "no-energy") {
    config->model.use_energy = false;
  } else if (variant == "no-sem") {
    config->model.semantic.variant = SemanticVariant::kOff;
  } else if (variant == "reversed-sem") {
    config->model.semantic.variant = SemanticVariant::kReversed;
  } else {
    throw Error(ErrorCode::kConfigInvalid, "unknown variant " + variant);
  }
}

}  // namespace svs
