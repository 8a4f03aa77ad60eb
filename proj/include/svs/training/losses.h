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

#ifndef SVS_TRAINING_LOSSES_H_
#define SVS_TRAINING_LOSSES_H_

#include <torch/torch.h>

#include <vector>

#include "json.hpp"
#include "svs/acoustic/discriminator.h"

namespace svs {

// Per-utterance losses take [B, ...] inputs and return [B]. A 1-D input is
// treated as a batch of one and returns a scalar.

// ||mask * (lf0_wav - lf0_hat)||_2 / (number of masked-in frames). A fully
// masked utterance scores 0.
torch::Tensor PitchLoss(const torch::Tensor& lf0_wav, const torch::Tensor& lf0_hat,
                        const torch::Tensor& mask);

// ||mask * (E - E_hat)||_2 / sqrt(number of frames): the per-frame RMS of
// the log-energy error. mask may be undefined (all frames count).
torch::Tensor EnergyLoss(const torch::Tensor& log_energy, const torch::Tensor& log_energy_hat,
                         const torch::Tensor& mask = {});

// Mean squared error of the duration ratio over valid phonemes.
torch::Tensor DurationLoss(const torch::Tensor& ratio_hat, const torch::Tensor& ratio,
                           const torch::Tensor& mask);

// KL(q(z|x) || p(z|c)) estimated at the posterior sample, with the flow's
// log-determinant, normalized by frame count. All latent tensors
// [B, C, T]; mask [B, 1, T]; logdet [B].
torch::Tensor KlLoss(const torch::Tensor& z_p, const torch::Tensor& logs_q,
                     const torch::Tensor& m_p, const torch::Tensor& logs_p,
                     const torch::Tensor& logdet, const torch::Tensor& mask);

// Mean absolute log-mel difference, per utterance.
torch::Tensor MelLoss(const torch::Tensor& mel_hat, const torch::Tensor& mel);

// Least-squares GAN terms, summed over sub-discriminators.
torch::Tensor DiscriminatorLoss(const std::vector<torch::Tensor>& real,
                                const std::vector<torch::Tensor>& fake);
torch::Tensor GeneratorAdversarialLoss(const std::vector<torch::Tensor>& fake);
torch::Tensor FeatureMatchingLoss(const std::vector<std::vector<torch::Tensor>>& real,
                                  const std::vector<std::vector<torch::Tensor>>& fake);

struct LossWeights {
  double mel = 45.0;
  double kl = 1.0;
  double duration = 1.0;
  double pitch = 1.0;
  double energy = 1.0;
  double fm = 2.0;
  double adv = 1.0;
};

void to_json(nlohmann::json& j, const LossWeights& w);
void from_json(const nlohmann::json& j, LossWeights& w);

// Batch-mean loss terms as scalar tensors (graph attached).
struct GeneratorTerms {
  torch::Tensor pitch, energy, duration, kl, mel, adv, fm;

  torch::Tensor Total(const LossWeights& w) const;
};

struct LossReport {
  double l_pitch = 0, l_energy = 0, l_duration = 0, l_kl = 0, l_mel = 0;
  double l_adv_g = 0, l_adv_d = 0, l_fm = 0;
  double total_g = 0, total_d = 0;
  double lr = 0;
  int64_t step = 0;

  bool AllFinite() const;
  bool operator==(const LossReport&) const = default;
};

void to_json(nlohmann::json& j, const LossReport& r);
void from_json(const nlohmann::json& j, LossReport& r);

// Fills the generator fields of a report; total_g is recomputed from the
// weights. Throws NonFiniteLoss when any term is NaN or infinite.
LossReport MakeReport(const GeneratorTerms& terms, const LossWeights& w,
                      const torch::Tensor& total_d, int64_t step);

}  // namespace svs

#endif  // SVS_TRAINING_LOSSES_H_
