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

#include "svs/nn/layers.h"

#include <cmath>

namespace svs::nn {

namespace F = torch::nn::functional;

torch::Tensor SequenceMask(const torch::Tensor& lengths, int64_t max_len) {
  auto range = torch::arange(max_len, lengths.options().dtype(torch::kLong));
  return range.unsqueeze(0) < lengths.to(torch::kLong).unsqueeze(1);
}

torch::Tensor SinusoidalPositions(int64_t length, int64_t dim,
                                  const torch::TensorOptions& opts) {
  auto pos = torch::arange(length, torch::TensorOptions().dtype(torch::kDouble))
                 .unsqueeze(1);
  auto i = torch::arange(dim, torch::TensorOptions().dtype(torch::kDouble));
  auto rate = torch::pow(10000.0, -(2.0 * torch::floor(i / 2.0)) / dim);
  auto angle = pos * rate.unsqueeze(0);
  auto even = (torch::remainder(i, 2) == 0).unsqueeze(0);
  return torch::where(even, torch::sin(angle), torch::cos(angle)).to(opts);
}

FftBlockImpl::FftBlockImpl(int64_t dim, int64_t heads, int64_t filter,
                           int64_t kernel, double dropout) {
  attention_ = register_module(
      "attention", torch::nn::MultiheadAttention(
                       torch::nn::MultiheadAttentionOptions(dim, heads).dropout(dropout)));
  norm1_ = register_module("norm1", torch::nn::LayerNorm(
                                        torch::nn::LayerNormOptions({dim})));
  norm2_ = register_module("norm2", torch::nn::LayerNorm(
                                        torch::nn::LayerNormOptions({dim})));
  conv1_ = register_module(
      "conv1", torch::nn::Conv1d(
                   torch::nn::Conv1dOptions(dim, filter, kernel).padding(kernel / 2)));
  conv2_ = register_module(
      "conv2", torch::nn::Conv1d(
                   torch::nn::Conv1dOptions(filter, dim, kernel).padding(kernel / 2)));
  dropout_ = register_module("dropout", torch::nn::Dropout(dropout));
}

torch::Tensor FftBlockImpl::forward(const torch::Tensor& x,
                                    const torch::Tensor& mask) {
  auto keep = mask.unsqueeze(-1).to(x.scalar_type());
  auto q = x.transpose(0, 1);  // [T, B, C]
  auto attn = std::get<0>(attention_->forward(q, q, q, /*key_padding_mask=*/~mask,
                                              /*need_weights=*/false));
  auto h = norm1_->forward(x + dropout_->forward(attn.transpose(0, 1))) * keep;
  auto keep_t = keep.transpose(1, 2);
  auto f = torch::relu(conv1_->forward(h.transpose(1, 2))) * keep_t;
  f = conv2_->forward(dropout_->forward(f)).transpose(1, 2);
  return norm2_->forward(h + dropout_->forward(f)) * keep;
}

FftStackImpl::FftStackImpl(int64_t blocks, int64_t dim, int64_t heads,
                           int64_t filter, int64_t kernel, double dropout) {
  for (int64_t i = 0; i < blocks; ++i) {
    blocks_->push_back(FftBlock(dim, heads, filter, kernel, dropout));
  }
  register_module("blocks", blocks_);
}

torch::Tensor FftStackImpl::forward(const torch::Tensor& x,
                                    const torch::Tensor& mask) {
  auto keep = mask.unsqueeze(-1).to(x.scalar_type());
  auto h = (x + SinusoidalPositions(x.size(1), x.size(2), x.options()).unsqueeze(0)) * keep;
  for (auto& block : *blocks_) h = block->as<FftBlock>()->forward(h, mask);
  return h;
}

ConvPredictorImpl::ConvPredictorImpl(int64_t in_dim, int64_t filter,
                                     int64_t kernel, int64_t layers,
                                     double dropout, int64_t out_dim) {
  for (int64_t i = 0; i < layers; ++i) {
    convs_->push_back(torch::nn::Conv1d(
        torch::nn::Conv1dOptions(i == 0 ? in_dim : filter, filter, kernel)
            .padding(kernel / 2)));
    norms_->push_back(torch::nn::LayerNorm(torch::nn::LayerNormOptions({filter})));
  }
  register_module("convs", convs_);
  register_module("norms", norms_);
  dropout_ = register_module("dropout", torch::nn::Dropout(dropout));
  proj_ = register_module(
      "proj", torch::nn::Linear(layers > 0 ? filter : in_dim, out_dim));
}

torch::Tensor ConvPredictorImpl::forward(const torch::Tensor& x,
                                         const torch::Tensor& mask) {
  auto keep = mask.unsqueeze(-1).to(x.scalar_type());
  auto h = x * keep;
  for (size_t i = 0; i < convs_->size(); ++i) {
    h = convs_[i]->as<torch::nn::Conv1d>()->forward(h.transpose(1, 2)).transpose(1, 2);
    h = norms_[i]->as<torch::nn::LayerNorm>()->forward(torch::relu(h));
    h = dropout_->forward(h) * keep;
  }
  return proj_->forward(h) * keep;
}

WaveNetImpl::WaveNetImpl(int64_t hidden, int64_t kernel, int64_t dilation_rate,
                         int64_t layers, int64_t cond_channels, double dropout)
    : hidden_(hidden), layers_(layers) {
  for (int64_t i = 0; i < layers; ++i) {
    const int64_t dilation = static_cast<int64_t>(std::pow(dilation_rate, i));
    in_layers_->push_back(torch::nn::Conv1d(
        torch::nn::Conv1dOptions(hidden, 2 * hidden, kernel)
            .dilation(dilation)
            .padding((kernel * dilation - dilation) / 2)));
    const int64_t out = i + 1 < layers ? 2 * hidden : hidden;
    res_skip_layers_->push_back(
        torch::nn::Conv1d(torch::nn::Conv1dOptions(hidden, out, 1)));
  }
  register_module("in_layers", in_layers_);
  register_module("res_skip_layers", res_skip_layers_);
  if (cond_channels > 0) {
    cond_layer_ = register_module(
        "cond", torch::nn::Conv1d(
                    torch::nn::Conv1dOptions(cond_channels, 2 * hidden * layers, 1)));
  }
  dropout_ = register_module("dropout", torch::nn::Dropout(dropout));
}

torch::Tensor WaveNetImpl::forward(const torch::Tensor& x,
                                   const torch::Tensor& mask,
                                   const torch::Tensor& cond) {
  auto h = x;
  auto output = torch::zeros_like(x);
  torch::Tensor g;
  if (cond.defined() && !cond_layer_.is_empty()) g = cond_layer_->forward(cond);
  for (int64_t i = 0; i < layers_; ++i) {
    auto in = in_layers_[i]->as<torch::nn::Conv1d>()->forward(h);
    if (g.defined()) in = in + g.slice(1, 2 * hidden_ * i, 2 * hidden_ * (i + 1));
    auto acts = torch::tanh(in.slice(1, 0, hidden_)) *
                torch::sigmoid(in.slice(1, hidden_, 2 * hidden_));
    acts = dropout_->forward(acts);
    auto rs = res_skip_layers_[i]->as<torch::nn::Conv1d>()->forward(acts);
    if (i + 1 < layers_) {
      h = (h + rs.slice(1, 0, hidden_)) * mask;
      output = output + rs.slice(1, hidden_, 2 * hidden_);
    } else {
      output = output + rs;
    }
  }
  return output * mask;
}

torch::Tensor GatherRows(const torch::Tensor& x, const torch::Tensor& index) {
  const int64_t b = x.size(0), s = x.size(1), c = x.size(2);
  auto padded = torch::cat({x, torch::zeros({b, 1, c}, x.options())}, 1);
  auto idx = torch::where(index < 0, torch::full_like(index, s), index);
  return torch::gather(padded, 1, idx.unsqueeze(-1).expand({b, idx.size(1), c}));
}

}  // namespace svs::nn
