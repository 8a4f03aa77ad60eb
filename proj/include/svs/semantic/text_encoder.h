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

#ifndef SVS_SEMANTIC_TEXT_ENCODER_H_
#define SVS_SEMANTIC_TEXT_ENCODER_H_

#include <torch/torch.h>

#include <string>

#include "json.hpp"
#include "svs/nn/layers.h"

namespace svs {

// standard: expand to phoneme level, then encode.
// reversed: encode word-level vectors, then expand (ablation).
// off: no semantic path; the prior encoder receives zeros.
enum class SemanticVariant { kStandard, kReversed, kOff };

std::string SemanticVariantName(SemanticVariant v);
SemanticVariant ParseSemanticVariant(const std::string& name);

struct SemanticEncoderConfig {
  int64_t n_fft_blocks = 6;
  int64_t input_dim = 768;
  // Width of the FFT blocks. Equal to input_dim by default; a smaller value
  // inserts an input projection (used for CPU-sized runs).
  int64_t model_dim = 768;
  int64_t hidden_dim = 192;
  int64_t heads = 2;
  int64_t filter_dim = 768;
  int64_t kernel = 3;
  double dropout = 0.1;
  SemanticVariant variant = SemanticVariant::kStandard;

  void Validate() const;
};

void to_json(nlohmann::json& j, const SemanticEncoderConfig& c);
void from_json(const nlohmann::json& j, SemanticEncoderConfig& c);

// Positional encoding + FFT blocks + linear projection to hidden_dim.
class SemanticEncoderImpl : public torch::nn::Module {
 public:
  explicit SemanticEncoderImpl(const SemanticEncoderConfig& config);

  // x: [B, L, input_dim]; mask: [B, L] bool. Returns [B, L, hidden_dim].
  // Throws ShapeMismatch on empty or wrongly sized input.
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& mask);

  const SemanticEncoderConfig& config() const { return config_; }

 private:
  SemanticEncoderConfig config_;
  torch::nn::Linear input_proj_{nullptr};
  nn::FftStack stack_{nullptr};
  torch::nn::Linear output_proj_{nullptr};
};
TORCH_MODULE(SemanticEncoder);

// Phoneme-level semantic hidden sequence [B, N, hidden_dim] for a batch.
//   word_vectors: [B, W, input_dim]; word_mask: [B, W] bool
//   source_index: [B, N] word index per phoneme, -1 for rests and padding
//   phoneme_mask: [B, N] bool
// The encoder may be empty when the variant is kOff.
torch::Tensor EncodeSemantics(SemanticEncoder& encoder, SemanticVariant variant,
                              int64_t hidden_dim,
                              const torch::Tensor& word_vectors,
                              const torch::Tensor& word_mask,
                              const torch::Tensor& source_index,
                              const torch::Tensor& phoneme_mask);

}  // namespace svs

#endif  // SVS_SEMANTIC_TEXT_ENCODER_H_
