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

#include "svs/acoustic/posterior.h"

#include "svs/base/error.h"

namespace svs {

namespace {

void CheckLatent(const torch::Tensor& x, const torch::Tensor& mask, int64_t channels,
                 const char* what) {
  if (x.dim() != 3 || x.size(1) != channels || mask.dim() != 3 ||
      mask.size(0) != x.size(0) || mask.size(1) != 1 || mask.size(2) != x.size(2)) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": expected [B, " + std::to_string(channels) +
                    ", T] with mask [B, 1, T], got " + c10::str(x.sizes()) + " / " +
                    c10::str(mask.sizes()));
  }
}

}  // namespace

PosteriorEncoderImpl::PosteriorEncoderImpl(const ModelConfig& config)
    : latent_(config.latent_dim), bins_(config.spec_bins) {
  pre_ = register_module(
      "pre", torch::nn::Conv1d(torch::nn::Conv1dOptions(config.spec_bins,
                                                        config.posterior_hidden, 1)));
  wavenet_ = register_module("wavenet",
                             nn::WaveNet(config.posterior_hidden, config.posterior_kernel,
                                         1, config.posterior_layers));
  proj_ = register_module(
      "proj", torch::nn::Conv1d(torch::nn::Conv1dOptions(config.posterior_hidden,
                                                         2 * config.latent_dim, 1)));
}

PosteriorOutputs PosteriorEncoderImpl::forward(const torch::Tensor& spec,
                                               const torch::Tensor& mask, bool sample) {
  CheckLatent(spec, mask, bins_, "posterior encoder");
  if (spec.size(2) < 1) throw Error(ErrorCode::kShapeMismatch, "posterior needs frames");
  auto h = pre_->forward(spec) * mask;
  h = wavenet_->forward(h, mask);
  auto stats = proj_->forward(h) * mask;
  PosteriorOutputs out;
  out.mean = stats.slice(1, 0, latent_);
  out.logstd = stats.slice(1, latent_, 2 * latent_);
  out.z = sample ? (out.mean + torch::randn_like(out.mean) * torch::exp(out.logstd)) * mask
                 : out.mean * mask;
  return out;
}

AffineCouplingImpl::AffineCouplingImpl(int64_t channels, int64_t hidden, int64_t kernel,
                                       int64_t layers, int64_t cond_channels)
    : half_(channels / 2) {
  if (channels % 2 != 0) {
    throw Error(ErrorCode::kConfigInvalid, "coupling needs an even channel count");
  }
  pre_ = register_module("pre",
                         torch::nn::Conv1d(torch::nn::Conv1dOptions(half_, hidden, 1)));
  wavenet_ = register_module("wavenet",
                             nn::WaveNet(hidden, kernel, 1, layers, cond_channels));
  post_ = register_module("post",
                          torch::nn::Conv1d(torch::nn::Conv1dOptions(hidden, 2 * half_, 1)));
  torch::NoGradGuard no_grad;
  post_->weight.zero_();
  post_->bias.zero_();
}

std::pair<torch::Tensor, torch::Tensor> AffineCouplingImpl::Stats(
    const torch::Tensor& x0, const torch::Tensor& mask, const torch::Tensor& cond) {
  auto h = pre_->forward(x0) * mask;
  h = wavenet_->forward(h, mask, cond);
  auto stats = post_->forward(h) * mask;
  return {stats.slice(1, 0, half_), stats.slice(1, half_, 2 * half_)};
}

std::pair<torch::Tensor, torch::Tensor> AffineCouplingImpl::forward(
    const torch::Tensor& x, const torch::Tensor& mask, const torch::Tensor& cond) {
  auto x0 = x.slice(1, 0, half_);
  auto x1 = x.slice(1, half_, 2 * half_);
  auto [m, logs] = Stats(x0, mask, cond);
  auto y1 = (m + x1 * torch::exp(logs)) * mask;
  return {torch::cat({x0, y1}, 1), logs.sum({1, 2})};
}

torch::Tensor AffineCouplingImpl::inverse(const torch::Tensor& y, const torch::Tensor& mask,
                                          const torch::Tensor& cond) {
  auto y0 = y.slice(1, 0, half_);
  auto y1 = y.slice(1, half_, 2 * half_);
  auto [m, logs] = Stats(y0, mask, cond);
  auto x1 = (y1 - m) * torch::exp(-logs) * mask;
  return torch::cat({y0, x1}, 1);
}

FlowImpl::FlowImpl(const ModelConfig& config, int64_t cond_channels)
    : channels_(config.latent_dim) {
  for (int64_t i = 0; i < config.flow_couplings; ++i) {
    couplings_.push_back(register_module(
        "coupling" + std::to_string(i),
        AffineCoupling(config.latent_dim, config.flow_hidden, config.flow_kernel,
                       config.flow_layers, cond_channels)));
  }
}

std::pair<torch::Tensor, torch::Tensor> FlowImpl::forward(const torch::Tensor& z,
                                                          const torch::Tensor& mask,
                                                          const torch::Tensor& cond) {
  CheckLatent(z, mask, channels_, "flow");
  auto x = z;
  auto logdet = torch::zeros({z.size(0)}, z.options());
  for (auto& c : couplings_) {
    auto [y, ld] = c->forward(x, mask, cond);
    x = torch::flip(y, {1});
    logdet = logdet + ld;
  }
  if (couplings_.size() % 2 == 1) x = torch::flip(x, {1});
  return {x, logdet};
}

torch::Tensor FlowImpl::inverse(const torch::Tensor& z_p, const torch::Tensor& mask,
                                const torch::Tensor& cond) {
  CheckLatent(z_p, mask, channels_, "flow");
  auto x = z_p;
  if (couplings_.size() % 2 == 1) x = torch::flip(x, {1});
  for (auto it = couplings_.rbegin(); it != couplings_.rend(); ++it) {
    x = (*it)->inverse(torch::flip(x, {1}), mask, cond);
  }
  return x;
}

double FlowImpl::RoundTripError(const torch::Tensor& z, const torch::Tensor& mask) {
  // Measured in double so the float32 rounding of large activations does
  // not mask the inverse itself; float -> double -> float is exact.
  torch::NoGradGuard no_grad;
  const auto dtype = z.scalar_type();
  to(torch::kDouble);
  auto zd = z.to(torch::kDouble), md = mask.to(torch::kDouble);
  auto back = inverse(forward(zd, md).first, md);
  const double err = ((back - zd) * md).abs().max().item<double>();
  to(dtype);
  return err;
}

}  // namespace svs
