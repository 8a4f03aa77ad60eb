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

#ifndef SVS_TRAINING_TRAINER_H_
#define SVS_TRAINING_TRAINER_H_

#include <torch/torch.h>

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "svs/acoustic/discriminator.h"
#include "svs/acoustic/model.h"
#include "svs/training/data.h"
#include "svs/training/losses.h"
#include "svs/training/run_config.h"

namespace svs {

// Decoder output for frame t lines up with input sample t * hop + offset,
// the centre of the analysis window minus half a hop.
int64_t FrameAudioOffset(const StftConfig& stft);

// Ground-truth waveform windows matching out.y_hat: [B, 1, segment * hop].
torch::Tensor TargetSegments(const Batch& batch, const GeneratorOutputs& out,
                             const StftConfig& stft);

// Frame- and phoneme-level terms per utterance, each [B].
struct UtteranceLosses {
  torch::Tensor pitch, energy, duration, kl;
};
UtteranceLosses ComputeUtteranceLosses(const Batch& batch, const GeneratorOutputs& out);

// All generator terms, batch-averaged. real/fake may be null, in which case
// the adversarial and feature-matching terms are zero.
GeneratorTerms ComputeGeneratorTerms(const Batch& batch, const GeneratorOutputs& out,
                                     const torch::Tensor& target_audio,
                                     const FeatureConfig& features,
                                     const DiscriminatorOutputs* real,
                                     const DiscriminatorOutputs* fake);

// Groups item indices into batches of similar frame count. The batch order
// is shuffled per epoch from the seed; batch contents are fixed.
std::vector<std::vector<size_t>> BucketBatches(const std::vector<int64_t>& frames,
                                               int64_t batch_size);

struct CheckpointRecord {
  std::string path;
  int64_t step = 0;
  double flow_round_trip = 0.0;  // max |f^-1(f(z)) - z| on a training batch
};

// Adversarial training loop over a prepared data directory.
class Trainer {
 public:
  // Reads split.json and the feature cache in data_dir; writes loss_log.jsonl,
  // config.json and checkpoints/ under out_dir.
  Trainer(const RunConfig& config, const std::string& data_dir, const std::string& out_dir);

  // One discriminator update followed by one generator update. A non-finite
  // generator loss aborts the step (no update) and throws NonFiniteLoss.
  LossReport Step();

  // Runs until config.train.steps, checkpointing every checkpoint_every
  // steps and at the end. on_step sees every report.
  std::vector<LossReport> Run(const std::function<void(const LossReport&)>& on_step = {});

  CheckpointRecord SaveCheckpointNow();

  int64_t step() const { return step_; }
  int64_t epoch() const { return step_ / steps_per_epoch(); }
  int64_t steps_per_epoch() const { return static_cast<int64_t>(batches_.size()); }
  double CurrentLearningRate() const;
  const RunConfig& config() const { return config_; }
  Synthesizer& model() { return model_; }
  MultiDiscriminator& discriminator() { return discriminator_; }
  const std::vector<CheckpointRecord>& checkpoints() const { return checkpoints_; }
  const std::vector<std::string>& train_ids() const { return train_ids_; }

 private:
  const std::vector<size_t>& NextBatch();

  RunConfig config_;
  std::string out_dir_;
  std::vector<std::string> train_ids_;
  std::vector<TrainingItem> items_;
  std::vector<std::vector<size_t>> batches_;
  std::vector<size_t> order_;
  Synthesizer model_{nullptr};
  MultiDiscriminator discriminator_{nullptr};
  std::unique_ptr<torch::optim::AdamW> opt_g_, opt_d_;
  int64_t step_ = 0;
  int64_t order_epoch_ = -1;
  std::vector<CheckpointRecord> checkpoints_;
};

}  // namespace svs

#endif  // SVS_TRAINING_TRAINER_H_
