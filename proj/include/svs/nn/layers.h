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

#ifndef SVS_NN_LAYERS_H_
#define SVS_NN_LAYERS_H_

#include <torch/torch.h>

namespace svs::nn {

// [B, T] bool mask, true on valid positions.
torch::Tensor SequenceMask(const torch::Tensor& lengths, int64_t max_len);

// [T, dim] sinusoidal positional encoding.
torch::Tensor SinusoidalPositions(int64_t length, int64_t dim,
                                  const torch::TensorOptions& opts);

// Feed-forward Transformer block: self-attention and a two-layer
// convolutional feed-forward network, each with a residual connection and
// post layer norm. Layout [B, T, C]; padded positions are zeroed on output.
class FftBlockImpl : public torch::nn::Module {
 public:
  FftBlockImpl(int64_t dim, int64_t heads, int64_t filter, int64_t kernel,
               double dropout);

  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& mask);

 private:
  torch::nn::MultiheadAttention attention_{nullptr};
  torch::nn::LayerNorm norm1_{nullptr}, norm2_{nullptr};
  torch::nn::Conv1d conv1_{nullptr}, conv2_{nullptr};
  torch::nn::Dropout dropout_{nullptr};
};
TORCH_MODULE(FftBlock);

// Positional encoding followed by a stack of FftBlocks.
class FftStackImpl : public torch::nn::Module {
 public:
  FftStackImpl(int64_t blocks, int64_t dim, int64_t heads, int64_t filter,
               int64_t kernel, double dropout);

  // x: [B, T, C]; mask: [B, T] bool.
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& mask);

 private:
  torch::nn::ModuleList blocks_;
};
TORCH_MODULE(FftStack);

// (conv -> ReLU -> LayerNorm -> dropout) x layers, then a linear projection.
// Layout [B, T, C] in, [B, T, out_dim] out.
class ConvPredictorImpl : public torch::nn::Module {
 public:
  ConvPredictorImpl(int64_t in_dim, int64_t filter, int64_t kernel,
                    int64_t layers, double dropout, int64_t out_dim);

  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& mask);

  torch::nn::Linear& projection() { return proj_; }

 private:
  torch::nn::ModuleList convs_;
  torch::nn::ModuleList norms_;
  torch::nn::Dropout dropout_{nullptr};
  torch::nn::Linear proj_{nullptr};
};
TORCH_MODULE(ConvPredictor);

// Non-causal WaveNet stack with gated activations (posterior encoder and
// coupling layers). Layout [B, C, T]; mask [B, 1, T] float.
class WaveNetImpl : public torch::nn::Module {
 public:
  WaveNetImpl(int64_t hidden, int64_t kernel, int64_t dilation_rate,
              int64_t layers, int64_t cond_channels = 0, double dropout = 0.0);

  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& mask,
                        const torch::Tensor& cond = {});

 private:
  int64_t hidden_;
  int64_t layers_;
  torch::nn::ModuleList in_layers_;
  torch::nn::ModuleList res_skip_layers_;
  torch::nn::Conv1d cond_layer_{nullptr};
  torch::nn::Dropout dropout_{nullptr};
};
TORCH_MODULE(WaveNet);

// Gathers rows of x [B, S, C] by index [B, N]; index -1 selects a zero row.
torch::Tensor GatherRows(const torch::Tensor& x, const torch::Tensor& index);

}  // namespace svs::nn

#endif  // SVS_NN_LAYERS_H_
