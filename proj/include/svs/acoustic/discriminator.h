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

#ifndef SVS_ACOUSTIC_DISCRIMINATOR_H_
#define SVS_ACOUSTIC_DISCRIMINATOR_H_

#include <torch/torch.h>

#include <vector>

#include "svs/acoustic/config.h"

namespace svs {

struct DiscriminatorOutputs {
  std::vector<torch::Tensor> scores;               // one per sub-discriminator
  std::vector<std::vector<torch::Tensor>> fmaps;   // intermediate activations
};

// Reshapes the waveform to [B, 1, T / p, p] and applies 2-D convolutions
// along time.
class PeriodDiscriminatorImpl : public torch::nn::Module {
 public:
  PeriodDiscriminatorImpl(int64_t period, int64_t channels);
  torch::Tensor forward(const torch::Tensor& y, std::vector<torch::Tensor>* fmap);

 private:
  int64_t period_;
  torch::nn::ModuleList convs_;
  torch::nn::Conv2d post_{nullptr};
};
TORCH_MODULE(PeriodDiscriminator);

// Strided grouped 1-D convolutions on the raw (or pooled) waveform.
class ScaleDiscriminatorImpl : public torch::nn::Module {
 public:
  explicit ScaleDiscriminatorImpl(int64_t channels);
  torch::Tensor forward(const torch::Tensor& y, std::vector<torch::Tensor>* fmap);

 private:
  torch::nn::ModuleList convs_;
  torch::nn::Conv1d post_{nullptr};
};
TORCH_MODULE(ScaleDiscriminator);

class MultiDiscriminatorImpl : public torch::nn::Module {
 public:
  explicit MultiDiscriminatorImpl(const ModelConfig& config);

  // y: [B, 1, S].
  DiscriminatorOutputs forward(const torch::Tensor& y);

  size_t size() const { return periods_.size() + scales_.size(); }

 private:
  std::vector<PeriodDiscriminator> periods_;
  std::vector<ScaleDiscriminator> scales_;
};
TORCH_MODULE(MultiDiscriminator);

}  // namespace svs

#endif  // SVS_ACOUSTIC_DISCRIMINATOR_H_
