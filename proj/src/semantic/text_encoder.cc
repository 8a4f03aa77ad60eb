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

#include "svs/semantic/text_encoder.h"

#include "svs/base/error.h"

namespace svs {

std::string SemanticVariantName(SemanticVariant v) {
  switch (v) {
    case SemanticVariant::kStandard: return "standard";
    case SemanticVariant::kReversed: return "reversed";
    case SemanticVariant::kOff: return "off";
  }
  return "?";
}

SemanticVariant ParseSemanticVariant(const std::string& name) {
  if (name == "standard") return SemanticVariant::kStandard;
  if (name == "reversed") return SemanticVariant::kReversed;
  if (name == "off") return SemanticVariant::kOff;
  throw Error(ErrorCode::kConfigInvalid, "unknown semantic variant " + name);
}

void SemanticEncoderConfig::Validate() const {
  if (n_fft_blocks < 0 || input_dim <= 0 || model_dim <= 0 || hidden_dim <= 0 ||
      heads <= 0 || filter_dim <= 0 || kernel <= 0 || kernel % 2 == 0) {
    throw Error(ErrorCode::kConfigInvalid, "semantic encoder dims must be positive");
  }
  if (model_dim % heads != 0) {
    throw Error(ErrorCode::kConfigInvalid, "model_dim not divisible by heads");
  }
  if (dropout < 0 || dropout >= 1) {
    throw Error(ErrorCode::kConfigInvalid, "dropout outside [0, 1)");
  }
}

void to_json(nlohmann::json& j, const SemanticEncoderConfig& c) {
  j = {{"n_fft_blocks", c.n_fft_blocks}, {"input_dim", c.input_dim},
       {"model_dim", c.model_dim},       {"hidden_dim", c.hidden_dim},
       {"heads", c.heads},               {"filter_dim", c.filter_dim},
       {"kernel", c.kernel},             {"dropout", c.dropout},
       {"variant", SemanticVariantName(c.variant)}};
}

void from_json(const nlohmann::json& j, SemanticEncoderConfig& c) {
  c.n_fft_blocks = j.value("n_fft_blocks", c.n_fft_blocks);
  c.input_dim = j.value("input_dim", c.input_dim);
  c.model_dim = j.value("model_dim", c.model_dim);
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  c.heads = j.value("heads", c.heads);
  c.filter_dim = j.value("filter_dim", c.filter_dim);
  c.kernel = j.value("kernel", c.kernel);
  c.dropout = j.value("dropout", c.dropout);
  if (j.contains("variant")) {
    c.variant = ParseSemanticVariant(j.at("variant").get<std::string>());
  }
  c.Validate();
}

SemanticEncoderImpl::SemanticEncoderImpl(const SemanticEncoderConfig& config)
    : config_(config) {
  config_.Validate();
  if (config_.model_dim != config_.input_dim) {
    input_proj_ = register_module(
        "input_proj", torch::nn::Linear(config_.input_dim, config_.model_dim));
  }
  stack_ = register_module(
      "stack", nn::FftStack(config_.n_fft_blocks, config_.model_dim, config_.heads,
                            config_.filter_dim, config_.kernel, config_.dropout));
  output_proj_ = register_module(
      "output_proj", torch::nn::Linear(config_.model_dim, config_.hidden_dim));
}

torch::Tensor SemanticEncoderImpl::forward(const torch::Tensor& x,
                                           const torch::Tensor& mask) {
  if (x.dim() != 3 || x.size(1) == 0 || x.size(2) != config_.input_dim) {
    throw Error(ErrorCode::kShapeMismatch,
                "semantic encoder expects [B, L>0, " +
                    std::to_string(config_.input_dim) + "], got " +
                    c10::str(x.sizes()));
  }
  if (mask.sizes() != x.sizes().slice(0, 2)) {
    throw Error(ErrorCode::kShapeMismatch, "semantic mask shape");
  }
  auto h = input_proj_.is_empty() ? x : input_proj_->forward(x);
  h = stack_->forward(h, mask);
  return output_proj_->forward(h) * mask.unsqueeze(-1).to(h.scalar_type());
}

torch::Tensor EncodeSemantics(SemanticEncoder& encoder, SemanticVariant variant,
                              int64_t hidden_dim,
                              const torch::Tensor& word_vectors,
                              const torch::Tensor& word_mask,
                              const torch::Tensor& source_index,
                              const torch::Tensor& phoneme_mask) {
  const int64_t b = source_index.size(0), n = source_index.size(1);
  auto opts = word_vectors.options();
  switch (variant) {
    case SemanticVariant::kOff:
      return torch::zeros({b, n, hidden_dim}, opts);
    case SemanticVariant::kStandard: {
      auto expanded = nn::GatherRows(word_vectors, source_index);
      return encoder->forward(expanded, phoneme_mask);
    }
    case SemanticVariant::kReversed: {
      if (word_vectors.size(1) == 0) {
        // No lyric words at all (rest-only utterance).
        return torch::zeros({b, n, hidden_dim}, opts);
      }
      // Rows without any word would leave attention fully masked; give them
      // one dummy key. Their outputs are never gathered.
      auto empty = word_mask.logical_not().all(1, true);
      auto first = torch::zeros_like(word_mask);
      first.select(1, 0).fill_(true);
      auto safe = word_mask.logical_or(first.logical_and(empty));
      auto encoded = encoder->forward(word_vectors, safe);
      return nn::GatherRows(encoded, source_index);
    }
  }
  throw Error(ErrorCode::kConfigInvalid, "bad variant");
}

}  // namespace svs
