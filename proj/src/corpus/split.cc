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

#include "svs/corpus/split.h"

#include <fstream>
#include <numeric>

#include "json.hpp"
#include "svs/base/error.h"
#include "svs/base/hash.h"

namespace svs {

DatasetSplit SplitDataset(const std::vector<std::string>& ids, size_t n_train,
                          uint64_t seed) {
  if (n_train >= ids.size()) {
    throw Error(ErrorCode::kInsufficientData,
                "n_train=" + std::to_string(n_train) + " but corpus has " +
                    std::to_string(ids.size()) + " utterances");
  }
  std::vector<size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }
  std::vector<bool> is_train(ids.size(), false);
  for (size_t i = 0; i < n_train; ++i) is_train[order[i]] = true;

  DatasetSplit split;
  split.seed = seed;
  for (size_t i = 0; i < ids.size(); ++i) {
    (is_train[i] ? split.train : split.eval).push_back(ids[i]);
  }
  return split;
}

void SaveSplit(const std::string& path, const DatasetSplit& split) {
  nlohmann::json j = {
      {"seed", split.seed}, {"train", split.train}, {"eval", split.eval}};
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kWriteFailure, "cannot write " + path);
  out << j.dump(1) << '\n';
}

DatasetSplit LoadSplit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  DatasetSplit split;
  split.seed = j.at("seed").get<uint64_t>();
  split.train = j.at("train").get<std::vector<std::string>>();
  split.eval = j.at("eval").get<std::vector<std::string>>();
  return split;
}

}  // namespace svs
