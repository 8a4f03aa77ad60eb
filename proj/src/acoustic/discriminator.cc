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

#include "svs/acoustic/discriminator.h"

#include <numeric>

#include "svs/base/error.h"

namespace svs {

namespace {

constexpr double kSlope = 0.1;

}  // namespace

PeriodDiscriminatorImpl::PeriodDiscriminatorImpl(int64_t period, int64_t channels)
    : period_(period) {
  const std::vector<int64_t> widths = {1, channels, 2 * channels, 4 * channels, 4 * channels};
  for (size_t i = 0; i + 1 < widths.size(); ++i) {
    const int64_t stride = i + 2 < widths.size() ? 3 : 1;
    convs_->push_back(torch::nn::Conv2d(
        torch::nn::Conv2dOptions(widths[i], widths[i + 1], {5, 1})
            .stride({stride, 1})
            .padding({2, 0})));
  }
  register_module("convs", convs_);
  post_ = register_module(
      "post", torch::nn::Conv2d(
                  torch::nn::Conv2dOptions(widths.back(), 1, {3, 1}).padding({1, 0})));
}

torch::Tensor PeriodDiscriminatorImpl::forward(const torch::Tensor& y,
                                               std::vector<torch::Tensor>* fmap) {
  auto x = y;
  const int64_t b = x.size(0), t = x.size(2);
  if (t % period_ != 0) {
    x = torch::nn::functional::pad(
        x, torch::nn::functional::PadFuncOptions({0, period_ - t % period_})
               .mode(torch::kReflect));
  }
  x = x.view({b, 1, -1, period_});
  for (auto& m : *convs_) {
    x = torch::leaky_relu(m->as<torch::nn::Conv2d>()->forward(x), kSlope);
    fmap->push_back(x);
  }
  x = post_->forward(x);
  fmap->push_back(x);
  return x.flatten(1);
}

ScaleDiscriminatorImpl::ScaleDiscriminatorImpl(int64_t channels) {
  struct Spec {
    int64_t in, out, kernel, stride, groups;
  };
  const int64_t c = channels;
  const std::vector<Spec> specs = {{1, c, 15, 1, 1},
                                   {c, 2 * c, 41, 4, 4},
                                   {2 * c, 4 * c, 41, 4, 16},
                                   {4 * c, 4 * c, 5, 1, 1}};
  for (const auto& s : specs) {
    const int64_t groups = std::min(s.groups, std::gcd(s.in, s.out));
    convs_->push_back(torch::nn::Conv1d(torch::nn::Conv1dOptions(s.in, s.out, s.kernel)
                                            .stride(s.stride)
                                            .groups(groups)
                                            .padding(s.kernel / 2)));
  }
  register_module("convs", convs_);
  post_ = register_module(
      "post", torch::nn::Conv1d(torch::nn::Conv1dOptions(4 * c, 1, 3).padding(1)));
}

torch::Tensor ScaleDiscriminatorImpl::forward(const torch::Tensor& y,
                                              std::vector<torch::Tensor>* fmap) {
  auto x = y;
  for (auto& m : *convs_) {
    x = torch::leaky_relu(m->as<torch::nn::Conv1d>()->forward(x), kSlope);
    fmap->push_back(x);
  }
  x = post_->forward(x);
  fmap->push_back(x);
  return x.flatten(1);
}

MultiDiscriminatorImpl::MultiDiscriminatorImpl(const ModelConfig& config) {
  for (size_t i = 0; i < config.discriminator_periods.size(); ++i) {
    periods_.push_back(register_module(
        "period" + std::to_string(i),
        PeriodDiscriminator(config.discriminator_periods[i], config.discriminator_channels)));
  }
  for (int64_t i = 0; i < config.scale_discriminators; ++i) {
    scales_.push_back(register_module("scale" + std::to_string(i),
                                      ScaleDiscriminator(config.discriminator_channels)));
  }
}

DiscriminatorOutputs MultiDiscriminatorImpl::forward(const torch::Tensor& y) {
  if (y.dim() != 3 || y.size(1) != 1 || y.size(2) < 1) {
    throw Error(ErrorCode::kShapeMismatch, "discriminator expects [B, 1, S>0]");
  }
  DiscriminatorOutputs out;
  for (auto& d : periods_) {
    out.fmaps.emplace_back();
    out.scores.push_back(d->forward(y, &out.fmaps.back()));
  }
  for (size_t i = 0; i < scales_.size(); ++i) {
    // Later scale discriminators see average-pooled audio.
    auto x = y;
    for (size_t k = 0; k < i; ++k) {
      x = torch::avg_pool1d(x, {4}, {2}, {2});
    }
    out.fmaps.emplace_back();
    out.scores.push_back(scales_[i]->forward(x, &out.fmaps.back()));
  }
  return out;
}

}  // namespace svs
