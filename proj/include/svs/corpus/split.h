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

#ifndef SVS_CORPUS_SPLIT_H_
#define SVS_CORPUS_SPLIT_H_

#include <cstdint>
#include <string>
#include <vector>

namespace svs {

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> eval;
  uint64_t seed = 0;

  bool operator==(const DatasetSplit&) const = default;
};

// Seeded Fisher-Yates over the ids; the first n_train go to train. Output
// lists keep corpus order. Throws Error(kInsufficientData) unless
// n_train < ids.size().
DatasetSplit SplitDataset(const std::vector<std::string>& ids, size_t n_train,
                          uint64_t seed);

void SaveSplit(const std::string& path, const DatasetSplit& split);
DatasetSplit LoadSplit(const std::string& path);

}  // namespace svs

#endif  // SVS_CORPUS_SPLIT_H_
