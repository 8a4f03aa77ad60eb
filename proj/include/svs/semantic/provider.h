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

#ifndef SVS_SEMANTIC_PROVIDER_H_
#define SVS_SEMANTIC_PROVIDER_H_

#include <torch/torch.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace svs {

constexpr int64_t kSemanticDim = 768;

// One contextual vector per lyric character.
struct WordEmbeddingSeq {
  torch::Tensor vectors;  // [n_words, 768] float
  std::vector<std::string> words;

  int64_t size() const { return static_cast<int64_t>(words.size()); }
};

// Source of frozen contextual character embeddings. Implementations must be
// deterministic and safe to call concurrently once constructed.
class SemanticProvider {
 public:
  virtual ~SemanticProvider() = default;
  virtual std::string name() const = 0;
  virtual int64_t dim() const { return kSemanticDim; }
  // [chars.size(), dim()] float tensor.
  virtual torch::Tensor Embed(const std::vector<std::string>& chars) const = 0;
};

// Runs the provider and checks the result has one vector per character.
WordEmbeddingSeq EmbedWords(const std::vector<std::string>& text,
                            const SemanticProvider& provider);

// Offline stand-in for a pretrained text model. Each character gets a
// hash-seeded Gaussian vector; neighbours are mixed in so identical
// characters in different contexts get different vectors.
class StubProvider : public SemanticProvider {
 public:
  explicit StubProvider(uint64_t seed = 0, int64_t dim = kSemanticDim);
  std::string name() const override { return "stub"; }
  int64_t dim() const override { return dim_; }
  torch::Tensor Embed(const std::vector<std::string>& chars) const override;

 private:
  std::vector<float> Base(const std::string& ch) const;

  uint64_t seed_;
  int64_t dim_;
};

// Averages subword token vectors back to one vector per character.
// token_to_char[i] is the character index of token i, or -1 for special
// tokens. Throws TokenizationMismatch when a character receives no token or
// an index is out of range.
torch::Tensor MeanPoolTokens(const torch::Tensor& token_vectors,
                             const std::vector<int64_t>& token_to_char,
                             int64_t n_chars);

// Embeddings exported ahead of time from a real text model (see
// tools/export_bert_embeddings.py). JSONL, one object per lyric:
//   {"text": "...", "token_to_char": [...], "vectors": [[...], ...]}
class PrecomputedProvider : public SemanticProvider {
 public:
  static std::unique_ptr<PrecomputedProvider> Load(const std::string& path);
  std::string name() const override { return "precomputed"; }
  int64_t dim() const override { return dim_; }
  torch::Tensor Embed(const std::vector<std::string>& chars) const override;

 private:
  std::map<std::string, torch::Tensor> table_;
  int64_t dim_ = kSemanticDim;
};

struct ProviderConfig {
  std::string kind = "stub";  // stub | precomputed
  std::string path;
  uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const ProviderConfig& c);
void from_json(const nlohmann::json& j, ProviderConfig& c);

// Throws ProviderUnavailable for unknown kinds or unreadable files.
std::unique_ptr<SemanticProvider> MakeProvider(const ProviderConfig& config);

}  // namespace svs

#endif  // SVS_SEMANTIC_PROVIDER_H_
