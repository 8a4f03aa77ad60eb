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

#include "svs/semantic/provider.h"

#include <fstream>

#include "svs/base/error.h"
#include "svs/base/hash.h"

namespace svs {

namespace {

std::string Join(const std::vector<std::string>& chars) {
  std::string s;
  for (const auto& c : chars) s += c;
  return s;
}

}  // namespace

WordEmbeddingSeq EmbedWords(const std::vector<std::string>& text,
                            const SemanticProvider& provider) {
  WordEmbeddingSeq seq;
  seq.words = text;
  seq.vectors = provider.Embed(text).to(torch::kFloat).contiguous();
  if (seq.vectors.dim() != 2 || seq.vectors.size(0) != seq.size()) {
    throw Error(ErrorCode::kTokenizationMismatch,
                provider.name() + " returned " +
                    std::to_string(seq.vectors.dim() == 2 ? seq.vectors.size(0) : -1) +
                    " vectors for " + std::to_string(seq.size()) + " characters");
  }
  if (seq.vectors.size(1) != provider.dim()) {
    throw Error(ErrorCode::kShapeMismatch, "provider dimension mismatch");
  }
  return seq;
}

StubProvider::StubProvider(uint64_t seed, int64_t dim) : seed_(seed), dim_(dim) {}

std::vector<float> StubProvider::Base(const std::string& ch) const {
  SplitMix64 rng(Fnv1a64(ch) ^ (seed_ * 0x9e3779b97f4a7c15ULL));
  std::vector<float> v(dim_);
  for (auto& x : v) x = static_cast<float>(0.5 * rng.Gaussian());
  return v;
}

torch::Tensor StubProvider::Embed(const std::vector<std::string>& chars) const {
  const int64_t n = static_cast<int64_t>(chars.size());
  std::vector<std::vector<float>> base;
  base.reserve(n);
  for (const auto& c : chars) base.push_back(Base(c));
  auto out = torch::zeros({n, dim_});
  auto acc = out.accessor<float, 2>();
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t d = 0; d < dim_; ++d) {
      float v = base[i][d];
      if (i > 0) v += 0.3f * base[i - 1][d];
      if (i + 1 < n) v += 0.3f * base[i + 1][d];
      acc[i][d] = v;
    }
  }
  return out;
}

torch::Tensor MeanPoolTokens(const torch::Tensor& token_vectors,
                             const std::vector<int64_t>& token_to_char,
                             int64_t n_chars) {
  if (token_vectors.dim() != 2 ||
      token_vectors.size(0) != static_cast<int64_t>(token_to_char.size())) {
    throw Error(ErrorCode::kTokenizationMismatch,
                "token vectors and token alignment differ in length");
  }
  auto sum = torch::zeros({n_chars, token_vectors.size(1)},
                          token_vectors.options().dtype(torch::kDouble));
  std::vector<int64_t> count(n_chars, 0);
  auto src = token_vectors.to(torch::kDouble);
  for (size_t t = 0; t < token_to_char.size(); ++t) {
    const int64_t c = token_to_char[t];
    if (c < 0) continue;
    if (c >= n_chars) {
      throw Error(ErrorCode::kTokenizationMismatch,
                  "token aligned to character " + std::to_string(c) + " of " +
                      std::to_string(n_chars));
    }
    sum[c] += src[t];
    ++count[c];
  }
  for (int64_t c = 0; c < n_chars; ++c) {
    if (count[c] == 0) {
      throw Error(ErrorCode::kTokenizationMismatch,
                  "character " + std::to_string(c) + " has no token");
    }
    sum[c] /= static_cast<double>(count[c]);
  }
  return sum.to(torch::kFloat);
}

std::unique_ptr<PrecomputedProvider> PrecomputedProvider::Load(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kProviderUnavailable, "cannot open " + path);
  auto provider = std::unique_ptr<PrecomputedProvider>(new PrecomputedProvider);
  std::string line;
  int64_t dim = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kProviderUnavailable, path + ": " + e.what());
    }
    const auto text = j.at("text").get<std::string>();
    const auto rows = j.at("vectors").get<std::vector<std::vector<float>>>();
    const auto align = j.at("token_to_char").get<std::vector<int64_t>>();
    if (rows.empty()) continue;
    if (dim < 0) dim = static_cast<int64_t>(rows[0].size());
    auto t = torch::empty({static_cast<int64_t>(rows.size()), dim});
    for (size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int64_t>(rows[r].size()) != dim) {
        throw Error(ErrorCode::kProviderUnavailable, path + ": ragged vectors");
      }
      t[r] = torch::from_blob(const_cast<float*>(rows[r].data()), {dim}).clone();
    }
    int64_t n_chars = 0;
    for (int64_t c : align) n_chars = std::max(n_chars, c + 1);
    provider->table_[text] = MeanPoolTokens(t, align, n_chars);
  }
  if (dim > 0) provider->dim_ = dim;
  return provider;
}

torch::Tensor PrecomputedProvider::Embed(
    const std::vector<std::string>& chars) const {
  auto it = table_.find(Join(chars));
  if (it == table_.end()) {
    throw Error(ErrorCode::kProviderUnavailable,
                "no precomputed embedding for \"" + Join(chars) + "\"");
  }
  return it->second;
}

void to_json(nlohmann::json& j, const ProviderConfig& c) {
  j = {{"kind", c.kind}, {"path", c.path}, {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, ProviderConfig& c) {
  c.kind = j.value("kind", c.kind);
  c.path = j.value("path", c.path);
  c.seed = j.value("seed", c.seed);
}

std::unique_ptr<SemanticProvider> MakeProvider(const ProviderConfig& config) {
  if (config.kind == "stub") return std::make_unique<StubProvider>(config.seed);
  if (config.kind == "precomputed") return PrecomputedProvider::Load(config.path);
  throw Error(ErrorCode::kProviderUnavailable, "unknown provider " + config.kind);
}

}  // namespace svs
