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

#ifndef SVS_DSP_FEATURES_H_
#define SVS_DSP_FEATURES_H_

#include <span>
#include <vector>

#include <torch/torch.h>

#include "svs/corpus/audio.h"
#include "svs/dsp/config.h"

namespace svs {

// Frame-level ground truth for one utterance; every tensor shares the frame
// axis (last dimension).
struct FrameFeatures {
  torch::Tensor linear_spec;  // [bins, T] magnitudes
  torch::Tensor mel_spec;     // [n_mels, T] log-compressed
  torch::Tensor energy;       // [T] L2 norm of each STFT frame
  torch::Tensor lf0;          // [T] ln(f0), 0 where unvoiced
  torch::Tensor voicing;      // [T] 0/1

  int64_t num_frames() const { return energy.size(0); }
};

// Complex STFT without centre padding, so the frame count follows
// floor((N - wl) / hl) + 1; inputs shorter than one window are zero-padded to
// a single frame. Accepts [N] or [B, N]; returns [bins, T] or [B, bins, T].
torch::Tensor Stft(const torch::Tensor& wave, const StftConfig& cfg);

// |X|, optionally as sqrt(|X|^2 + eps) so the gradient stays finite at 0.
torch::Tensor Magnitude(const torch::Tensor& complex_frames, double eps = 0.0);

// sqrt(sum_k |X[k, t]|^2) per frame; accepts complex or magnitude input with
// bins on dim -2.
torch::Tensor FrameEnergy(const torch::Tensor& frames);

// [n_mels, bins] triangular filters on the HTK mel scale with area
// normalization, so white noise gives a flat mel spectrum.
torch::Tensor MelFilterbank(int sample_rate, int fft_size, int n_mels,
                            double fmin, double fmax);

// log(max(mel @ |X|, floor)). Differentiable in the waveform when eps > 0.
torch::Tensor LogMelSpectrogram(const torch::Tensor& wave,
                                const FeatureConfig& cfg, double eps = 0.0);

struct F0Track {
  std::vector<double> lf0;   // ln Hz, 0 when unvoiced
  std::vector<int> voicing;  // 0/1
};

// YIN on the STFT frame grid: frame t analyses samples [t*hl, t*hl + wl).
F0Track ExtractF0(std::span<const float> samples, int sample_rate,
                  const StftConfig& stft, const F0Config& cfg);

FrameFeatures ComputeFrameFeatures(const Waveform& wave,
                                   const FeatureConfig& cfg);

torch::Tensor WaveformTensor(const Waveform& wave,
                             torch::Dtype dtype = torch::kFloat);

}  // namespace svs

#endif  // SVS_DSP_FEATURES_H_
