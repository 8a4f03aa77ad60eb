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

#ifndef SVS_ACOUSTIC_POSTERIOR_H_
#define SVS_ACOUSTIC_POSTERIOR_H_

#include <torch/torch.h>

#include "svs/acoustic/config.h"
#include "svs/nn/layers.h"

namespace svs {

struct PosteriorOutputs {
  torch::Tensor z;       // [B, latent, T]
  torch::Tensor mean;    // [B, latent, T]
  torch::Tensor logstd;  // [B, latent, T]
};

// Linear spectrogram -> latent z through a WaveNet stack.
class PosteriorEncoderImpl : public torch::nn::Module {
 public:
  explicit PosteriorEncoderImpl(const ModelConfig& config);

  // spec: [B, bins, T]; mask: [B, 1, T] float. sample=false returns the
  // mean as z.
  PosteriorOutputs forward(const torch::Tensor& spec, const torch::Tensor& mask,
                           bool sample = true);

 private:
  int64_t latent_;
  int64_t bins_;
  torch::nn::Conv1d pre_{nullptr};
  nn::WaveNet wavenet_{nullptr};
  torch::nn::Conv1d proj_{nullptr};
};
TORCH_MODULE(PosteriorEncoder);

// Affine coupling: the second half of the channels is scaled and shifted by
// a WaveNet of the first half. The output layer starts at zero, so a fresh
// layer is the identity.
class AffineCouplingImpl : public torch::nn::Module {
 public:
  AffineCouplingImpl(int64_t channels, int64_t hidden, int64_t kernel, int64_t layers,
                     int64_t cond_channels = 0);

  // Returns (y, logdet [B]).
  std::pair<torch::Tensor, torch::Tensor> forward(const torch::Tensor& x,
                                                  const torch::Tensor& mask,
                                                  const torch::Tensor& cond = {});
  torch::Tensor inverse(const torch::Tensor& y, const torch::Tensor& mask,
                        const torch::Tensor& cond = {});

  torch::nn::Conv1d& post() { return post_; }

 private:
  std::pair<torch::Tensor, torch::Tensor> Stats(const torch::Tensor& x0,
                                                const torch::Tensor& mask,
                                                const torch::Tensor& cond);
  int64_t half_;
  torch::nn::Conv1d pre_{nullptr};
  nn::WaveNet wavenet_{nullptr};
  torch::nn::Conv1d post_{nullptr};
};
TORCH_MODULE(AffineCoupling);

// Couplings interleaved with channel flips (an even number of flips, so the
// untrained flow is the identity map).
class FlowImpl : public torch::nn::Module {
 public:
  explicit FlowImpl(const ModelConfig& config, int64_t cond_channels = 0);

  // Forward direction z -> z_p with the summed log-determinant [B].
  std::pair<torch::Tensor, torch::Tensor> forward(const torch::Tensor& z,
                                                  const torch::Tensor& mask,
                                                  const torch::Tensor& cond = {});
  torch::Tensor inverse(const torch::Tensor& z_p, const torch::Tensor& mask,
                        const torch::Tensor& cond = {});

  // Max |inverse(forward(z)) - z| on masked positions.
  double RoundTripError(const torch::Tensor& z, const torch::Tensor& mask);

  std::vector<AffineCoupling>& couplings() { return couplings_; }

 private:
  int64_t channels_;
  std::vector<AffineCoupling> couplings_;
};
TORCH_MODULE(Flow);

}  // namespace svs

#endif  // SVS_ACOUSTIC_POSTERIOR_H_
