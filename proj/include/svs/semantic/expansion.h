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

#ifndef SVS_SEMANTIC_EXPANSION_H_
#define SVS_SEMANTIC_EXPANSION_H_

#include <torch/torch.h>

#include <string>
#include <vector>

#include "svs/corpus/lexicon.h"
#include "svs/semantic/provider.h"

namespace svs {

// How word-level vectors map onto the utterance phoneme sequence.
//   n1[w]: phonemes in the dictionary reading of word w.
//   n2[k]: times the k-th dictionary phoneme repeats in the utterance.
//   rest_indices: SP/AP positions, which receive zero vectors.
struct ExpansionPlan {
  std::vector<int64_t> n1;
  std::vector<int64_t> n2;
  std::vector<int64_t> rest_indices;
  std::vector<std::string> readings;  // chosen pinyin per word

  int64_t num_phonemes() const;

  // Per phoneme position: source word index, or -1 for rests.
  std::vector<int64_t> SourceWords() const;

  // Throws PlanMismatch when the count invariants do not hold.
  void Validate() const;
};

// Left-to-right matching of dictionary phonemes against the utterance.
// Repetitions are taken greedily (longest run first) and polyphonic
// characters try readings in lexicon order; on a dead end the search backs
// off to shorter runs or the next reading. Throws AlignmentFailure when no
// consistent reading exists.
ExpansionPlan BuildExpansionPlan(const std::vector<std::string>& text,
                                 const std::vector<std::string>& phonemes,
                                 const PinyinLexicon& lexicon,
                                 const PhonemeDict& dict);

// Replicates word vectors [n_words, D] to phoneme level [L, D], zero at
// rests. Throws PlanMismatch when the plan does not fit the words.
torch::Tensor ExpandEmbeddings(const torch::Tensor& words,
                               const ExpansionPlan& plan);
torch::Tensor ExpandEmbeddings(const WordEmbeddingSeq& words,
                               const ExpansionPlan& plan);

}  // namespace svs

#endif  // SVS_SEMANTIC_EXPANSION_H_
