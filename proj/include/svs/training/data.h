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

#ifndef SVS_TRAINING_DATA_H_
#define SVS_TRAINING_DATA_H_

#include <torch/torch.h>

#include <string>
#include <vector>

#include "svs/acoustic/model.h"
#include "svs/corpus/lexicon.h"
#include "svs/corpus/utterance.h"
#include "svs/score/score.h"
#include "svs/semantic/expansion.h"
#include "svs/semantic/provider.h"
#include "svs/training/run_config.h"

namespace svs {

// Model-ready score of one utterance.
struct ScoreItem {
  std::string id;
  ScoreFeatures score;
  torch::Tensor word_vectors;         // [W, dim] float
  std::vector<int64_t> source_index;  // per phoneme: word index or -1
};

// Lexicon, phoneme dictionary and vocabulary needed to turn utterances into
// ScoreItems.
struct TextFrontend {
  PinyinLexicon lexicon;
  PhonemeDict dict;
  PhonemeVocabulary vocab;

  // Reads lexicon.txt and opencpop-strict.txt from dir.
  static TextFrontend Load(const std::string& dir, const std::vector<std::string>& vocabulary);
};

// Word vectors may be passed in (from the cache) or computed by provider.
ScoreItem MakeScoreItem(const Utterance& utt, const TextFrontend& frontend,
                        const FeatureConfig& features, const torch::Tensor& word_vectors);
ScoreItem MakeScoreItem(const Utterance& utt, const TextFrontend& frontend,
                        const FeatureConfig& features, const SemanticProvider& provider);

// Ground truth for one training utterance.
struct TrainingItem {
  ScoreItem input;
  Utterance utterance;
  std::vector<int64_t> durations;  // annotated phoneme frames
  torch::Tensor linear;            // [bins, T]
  torch::Tensor mel;               // [n_mels, T]
  torch::Tensor energy;            // [T]
  torch::Tensor log_energy;        // [T]
  torch::Tensor lf0;               // [T]
  torch::Tensor voicing;           // [T]
  torch::Tensor audio;             // [S]

  int64_t frames() const { return energy.size(0); }
};

// Pads a list of score items into a batch.
ModelInputs CollateInputs(const std::vector<const ScoreItem*>& items, int64_t semantic_dim);

struct Batch {
  std::vector<std::string> ids;
  ModelInputs inputs;
  PriorTargets targets;          // durations, lf0, log_energy
  torch::Tensor duration_ratio;  // [B, N] annotated frames / note frames
  torch::Tensor linear;          // [B, bins, T]
  torch::Tensor voicing;         // [B, T]
  torch::Tensor frame_lengths;   // [B]
  torch::Tensor audio;           // [B, S] zero padded
};

Batch Collate(const std::vector<const TrainingItem*>& items, int64_t semantic_dim);

// log(max(energy, floor)).
torch::Tensor LogEnergy(const torch::Tensor& energy, double floor);

// Linear-interpolated percentile (q in [0, 100]).
double Percentile(std::vector<double> values, double q);

struct PrepareOptions {
  std::string corpus_dir;  // segments/transcriptions.txt, segments/wavs/, lexicon files
  std::string out_dir;
  uint64_t seed = 0;
  int64_t n_eval = -1;          // -1: 206/3756 of the corpus, at least 1
  int64_t max_utterances = 0;   // 0 = all
};

struct PrepareSummary {
  int64_t n_utterances = 0;
  int64_t n_train = 0;
  int64_t n_eval = 0;
  std::vector<std::string> skipped;  // "line N: error" for rejected lines
};

// Parses, resamples and featurizes the corpus and writes under out_dir:
//   manifest.jsonl, split.json, wavs/<id>.wav, features/<id>.pt,
//   embeddings/<id>.pt, lexicon.txt, opencpop-strict.txt, config.json.
// `base` supplies feature/model/provider settings; the written config
// additionally freezes the energy quantizer (0.1 / 99.9 percentiles of the
// training log energy) and the phoneme vocabulary.
PrepareSummary PrepareData(const PrepareOptions& options, const RunConfig& base,
                           RunConfig* written);

// Loads cached items for the given ids. Throws ConfigHashMismatch when the
// cache was built with different feature settings.
std::vector<TrainingItem> LoadTrainingItems(const std::string& data_dir, const RunConfig& config,
                                            const std::vector<std::string>& ids);

}  // namespace svs

#endif  // SVS_TRAINING_DATA_H_
