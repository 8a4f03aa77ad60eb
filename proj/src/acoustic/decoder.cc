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

#include "svs/acoustic/decoder.h"

#include <cmath>

#include "svs/base/error.h"

namespace svs {

namespace {

constexpr double kSlope = 0.1;

torch::Tensor LeakyRelu(const torch::Tensor& x) {
  return torch::leaky_relu(x, kSlope);
}

}  // namespace

DecoderImpl::DecoderImpl(const ModelConfig& config)
    : latent_(config.latent_dim),
      hop_(config.hop_length()),
      dilations_(config.decoder_dilations),
      harmonics_(config.decoder_harmonics),
      sample_rate_(config.sample_rate) {
  const int64_t k = config.decoder_resblock_kernel;
  int64_t ch = config.decoder_channels;
  conv_pre_ = register_module(
      "conv_pre",
      torch::nn::Conv1d(torch::nn::Conv1dOptions(latent_, ch, 7).padding(3)));
  int64_t reached = 1;
  for (int64_t u : config.decoder_upsample_factors) {
    const int64_t out = ch / 2;
    reached *= u;
    if (harmonics_ > 0) {
      const int64_t stride = hop_ / reached;
      auto opts = stride > 1 ? torch::nn::Conv1dOptions(1, out, 2 * stride)
                                   .stride(stride)
                                   .padding(stride / 2)
                             : torch::nn::Conv1dOptions(1, out, 1);
      source_convs_->push_back(torch::nn::Conv1d(opts));
    }
    ups_->push_back(torch::nn::ConvTranspose1d(
        torch::nn::ConvTranspose1dOptions(ch, out, 2 * u).stride(u).padding(u / 2)));
    for (int64_t d : dilations_) {
      res_convs1_->push_back(torch::nn::Conv1d(
          torch::nn::Conv1dOptions(out, out, k).dilation(d).padding((k * d - d) / 2)));
      res_convs2_->push_back(
          torch::nn::Conv1d(torch::nn::Conv1dOptions(out, out, k).padding(k / 2)));
    }
    ch = out;
  }
  register_module("ups", ups_);
  register_module("res_convs1", res_convs1_);
  register_module("res_convs2", res_convs2_);
  if (harmonics_ > 0) {
    source_merge_ = register_module("source_merge", torch::nn::Conv1d(harmonics_, 1, 1));
    register_module("source_convs", source_convs_);
  }
  conv_post_ = register_module(
      "conv_post",
      torch::nn::Conv1d(torch::nn::Conv1dOptions(ch, 1, 7).padding(3).bias(false)));
  torch::NoGradGuard no_grad;
  for (auto& p : named_parameters()) {
    if (p.key().find("conv_pre") == std::string::npos &&
        p.key().find("source") == std::string::npos &&
        p.key().find("weight") != std::string::npos) {
      p.value().normal_(0.0, 0.01);
    }
  }
}

void DecoderImpl::ZeroOutputLayer() {
  torch::NoGradGuard no_grad;
  conv_post_->weight.zero_();
}

torch::Tensor DecoderImpl::Harmonics(const torch::Tensor& f0) const {
  auto f = f0.to(torch::kDouble).repeat_interleave(hop_, 1);  // [B, S]
  auto cycles = torch::cumsum(f / static_cast<double>(sample_rate_), 1);
  cycles = cycles - torch::floor(cycles);
  auto k = torch::arange(1, harmonics_ + 1, f.options()).view({1, -1, 1});
  auto phase = 2.0 * M_PI * cycles.unsqueeze(1) * k;
  // Harmonics above Nyquist and unvoiced samples are silent.
  auto keep = (f.unsqueeze(1) * k < sample_rate_ / 2.0) & (f.unsqueeze(1) > 0);
  return (0.1 * torch::sin(phase) * keep).to(f0.scalar_type());
}

torch::Tensor DecoderImpl::forward(const torch::Tensor& z, const torch::Tensor& f0) {
  if (z.dim() != 3 || z.size(1) != latent_ || z.size(2) < 1) {
    throw Error(ErrorCode::kShapeMismatch,
                "decoder expects [B, " + std::to_string(latent_) + ", T>0], got " +
                    c10::str(z.sizes()));
  }
  torch::Tensor source;
  if (harmonics_ > 0) {
    if (!f0.defined() || f0.dim() != 2 || f0.size(0) != z.size(0) || f0.size(1) != z.size(2)) {
      throw Error(ErrorCode::kShapeMismatch, "harmonic source needs f0 [B, T]");
    }
    source = torch::tanh(source_merge_->forward(Harmonics(f0.detach()).to(z.scalar_type())));
  }
  auto x = conv_pre_->forward(z);
  size_t r = 0;
  for (size_t i = 0; i < ups_->size(); ++i) {
    x = ups_[i]->as<torch::nn::ConvTranspose1d>()->forward(LeakyRelu(x));
    if (source.defined()) x = x + source_convs_[i]->as<torch::nn::Conv1d>()->forward(source);
    for (size_t j = 0; j < dilations_.size(); ++j, ++r) {
      auto xt = res_convs1_[r]->as<torch::nn::Conv1d>()->forward(LeakyRelu(x));
      xt = res_convs2_[r]->as<torch::nn::Conv1d>()->forward(LeakyRelu(xt));
      x = x + xt;
    }
  }
  auto y = torch::tanh(conv_post_->forward(LeakyRelu(x)));
  TORCH_CHECK(y.size(2) == z.size(2) * hop_, "decoder length mismatch");
  return y;
}

}  // namespace svs
