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

#ifndef SVS_TRAINING_RUN_CONFIG_H_
#define SVS_TRAINING_RUN_CONFIG_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "svs/acoustic/config.h"
#include "svs/dsp/config.h"
#include "svs/score/score.h"
#include "svs/semantic/provider.h"
#include "svs/training/losses.h"

namespace svs {

struct OptimizerSchedule {
  double beta1 = 0.8;
  double beta2 = 0.99;
  double epsilon = 1e-9;
  double weight_decay = 0.01;
  double lr0 = 1e-4;
  double decay = 0.999875;
  // Decay once per epoch (default) or once per step.
  bool decay_per_epoch = true;

  void Validate() const;
  // lr0 * decay^k, k the completed epoch (or step) count.
  double LearningRate(int64_t epoch, int64_t step = 0) const;
};

void to_json(nlohmann::json& j, const OptimizerSchedule& s);
void from_json(const nlohmann::json& j, OptimizerSchedule& s);

struct TrainOptions {
  int64_t steps = 2000;
  int64_t batch_size = 4;
  int64_t segment_frames = 32;
  // Ground-truth pitch/energy feed the embeddings for the first N steps.
  int64_t teacher_forcing_steps = 10000;
  int64_t checkpoint_every = 500;
  // Use only the first N training utterances (0 = all).
  int64_t max_utterances = 0;
  uint64_t seed = 1234;
  int threads = 1;
  double noise_scale = 0.667;  // prior sampling temperature at inference
};

void to_json(nlohmann::json& j, const TrainOptions& o);
void from_json(const nlohmann::json& j, TrainOptions& o);

// Everything a run needs, stored as one JSON document (config.json).
struct RunConfig {
  FeatureConfig features;
  ModelConfig model;
  OptimizerSchedule optimizer;
  LossWeights loss_weights;
  TrainOptions train;
  ProviderConfig provider;
  PitchQuantizer pitch_quantizer = PitchQuantizer::Default();
  QuantizerSpec energy_quantizer{256, -6.0, 3.0};
  std::vector<std::string> vocabulary;

  void Validate() const;  // throws ConfigInvalid
  PhonemeVocabulary Vocabulary() const { return PhonemeVocabulary(vocabulary); }

  // Hash of the parts that fix the model's meaning (features, architecture,
  // quantizers, vocabulary). Training-only settings are excluded so a
  // checkpoint stays loadable after changing the step budget.
  std::string Hash() const;

  static RunConfig Load(const std::string& path);  // throws ConfigInvalid
  void Save(const std::string& path) const;        // throws WriteFailure
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

// The configuration used for CPU-sized runs: the reference dimensions
// where they are fixed (hidden 192, 6 FFT blocks, 3-layer duration
// predictor, 256 energy bins), a narrow semantic encoder and small
// flow/decoder/discriminators.
RunConfig DeskConfig();

// Applies an ablation variant: "proposed", "no-energy", "no-sem",
// "reversed-sem". Throws ConfigInvalid for other names.
void ApplyVariant(RunConfig* config, const std::string& variant);
std::vector<std::string> VariantNames();

}  // namespace svs

#endif  // SVS_TRAINING_RUN_CONFIG_H_
