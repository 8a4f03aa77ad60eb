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

#ifndef SVS_TRAINING_CHECKPOINT_H_
#define SVS_TRAINING_CHECKPOINT_H_

#include <string>

#include "svs/acoustic/discriminator.h"
#include "svs/acoustic/model.h"
#include "svs/training/run_config.h"

namespace svs {

struct CheckpointInfo {
  RunConfig config;
  std::string config_hash;
  int64_t step = 0;
};

// One archive holding generator ("g.*") and optionally discriminator ("d.*")
// parameters and buffers, the run config and its hash. Written to a
// temporary file and renamed. Throws CheckpointWriteFailure.
void SaveCheckpoint(const std::string& path, Synthesizer& model,
                    MultiDiscriminator* discriminator, const RunConfig& config, int64_t step);

// Throws IoError for unreadable files.
CheckpointInfo ReadCheckpointInfo(const std::string& path);

// Loads parameters into models built from `runtime`. Throws
// ConfigHashMismatch when the checkpoint was written for another config.
CheckpointInfo LoadCheckpoint(const std::string& path, const RunConfig& runtime,
                              Synthesizer& model, MultiDiscriminator* discriminator = nullptr);

// Builds the generator from the checkpoint's own config and loads it.
Synthesizer LoadSynthesizer(const std::string& path, CheckpointInfo* info = nullptr);

}  // namespace svs

#endif  // SVS_TRAINING_CHECKPOINT_H_
