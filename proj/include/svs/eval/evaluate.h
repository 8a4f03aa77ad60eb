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

#ifndef SVS_EVAL_EVALUATE_H_
#define SVS_EVAL_EVALUATE_H_

#include <string>
#include <vector>

#include "svs/eval/metrics.h"
#include "svs/training/run_config.h"

namespace svs {

struct EvalOptions {
  std::string checkpoint;
  std::string data_dir;
  std::string out_dir;          // report, synthesized wavs, optional plots
  std::string split = "eval";   // "eval", "train" or "all"
  std::string variant;          // empty: take it from the checkpoint
  std::string config;           // runtime config; empty: <data_dir>/config.json
  uint64_t seed = 1;
  int64_t max_utterances = 0;   // 0 = all
  bool write_audio = true;
  bool plots = false;
};

// The ablation name a config corresponds to.
std::string VariantOf(const RunConfig& config);

// Synthesizes every selected utterance of a prepared data directory and
// scores it against the reference recording. Writes metrics.json and
// metrics.tsv to out_dir. The runtime config (with the variant applied) must
// hash like the checkpoint's, otherwise ConfigHashMismatch.
MetricReport Evaluate(const EvalOptions& options);

}  // namespace svs

#endif  // SVS_EVAL_EVALUATE_H_
