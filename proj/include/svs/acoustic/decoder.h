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

#ifndef SVS_ACOUSTIC_DECODER_H_
#define SVS_ACOUSTIC_DECODER_H_

#include <torch/torch.h>

#include <vector>

#include "svs/acoustic/config.h"

namespace svs {

// HiFi-GAN style generator: transposed-convolution upsampling by the
// configured factors, each stage followed by a dilated residual block.
class DecoderImpl : public torch::nn::Module {
 public:
  explicit DecoderImpl(const ModelConfig& config);

  // z: [B, latent, T] -> [B, 1, T * hop]. f0 [B, T] in Hz (0 = unvoiced)
  // drives the harmonic source and is required when it is enabled.
  torch::Tensor forward(const torch::Tensor& z, const torch::Tensor& f0 = {});

  // Sum of sines at k * f0 with phase accumulated per sample: [B, N, T * hop].
  torch::Tensor Harmonics(const torch::Tensor& f0) const;

  void ZeroOutputLayer();

 private:
  int64_t latent_;
  int64_t hop_;
  std::vector<int64_t> dilations_;
  torch::nn::Conv1d conv_pre_{nullptr};
  torch::nn::ModuleList ups_;
  torch::nn::ModuleList res_convs1_;  // dilated
  torch::nn::ModuleList res_convs2_;  // dilation 1
  torch::nn::Conv1d conv_post_{nullptr};
  int64_t harmonics_;
  int64_t sample_rate_;
  torch::nn::Conv1d source_merge_{nullptr};
  torch::nn::ModuleList source_convs_;  // source -> each stage's resolution
};
TORCH_MODULE(Decoder);

}  // namespace svs

#endif  // SVS_ACOUSTIC_DECODER_H_
