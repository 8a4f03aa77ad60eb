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

#ifndef SVS_EVAL_SYNTHESIS_H_
#define SVS_EVAL_SYNTHESIS_H_

#include <torch/torch.h>

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "svs/acoustic/model.h"
#include "svs/corpus/audio.h"
#include "svs/corpus/utterance.h"
#include "svs/semantic/provider.h"
#include "svs/training/checkpoint.h"
#include "svs/training/data.h"

namespace svs {

struct SynthesisResult {
  Waveform wave;
  std::vector<int64_t> durations;  // predicted frames per phoneme
  torch::Tensor lf0_hat;           // [T] predicted frame LF0 (0 at rests)
};

// Inference from a trained checkpoint. Model state is read-only after
// construction; concurrent Synthesize calls are serialized because noise is
// drawn from the global generator reseeded per call.
class SynthesisEngine {
 public:
  // lexicon_dir holds lexicon.txt and opencpop-strict.txt (a prepared data
  // directory does). `runtime` is the config the caller expects; its hash
  // must match the checkpoint (ConfigHashMismatch otherwise). With no
  // runtime config the checkpoint's own config is used.
  SynthesisEngine(const std::string& checkpoint, const std::string& lexicon_dir,
                  const RunConfig* runtime = nullptr);

  // Word vectors come from the configured provider; throws
  // ProviderUnavailable when the semantic path needs one that fails.
  SynthesisResult Synthesize(const Utterance& utt, uint64_t seed) const;
  // Same with precomputed word vectors [W, 768].
  SynthesisResult Synthesize(const Utterance& utt, const torch::Tensor& word_vectors,
                             uint64_t seed) const;

  const RunConfig& config() const { return info_.config; }

 private:
  CheckpointInfo info_;
  mutable Synthesizer model_{nullptr};
  TextFrontend frontend_;
  std::unique_ptr<SemanticProvider> provider_;
  std::string provider_error_;
  mutable std::mutex mu_;
};

}  // namespace svs

#endif  // SVS_EVAL_SYNTHESIS_H_
