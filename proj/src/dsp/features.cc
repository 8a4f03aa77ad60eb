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

#include "svs/dsp/features.h"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "svs/base/error.h"

namespace svs {

namespace {

torch::Tensor Window(const StftConfig& cfg, const torch::TensorOptions& opts) {
  if (cfg.window == "hann") return torch::hann_window(cfg.window_length, true, opts);
  if (cfg.window == "hamming") {
    return torch::hamming_window(cfg.window_length, true, opts);
  }
  return torch::ones({cfg.window_length}, opts);
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

torch::Tensor Stft(const torch::Tensor& wave, const StftConfig& cfg) {
  cfg.Validate();
  if (wave.dim() < 1 || wave.dim() > 2 || wave.size(-1) == 0) {
    throw Error(ErrorCode::kConfigInvalid, "waveform must be non-empty [N] or [B, N]");
  }
  torch::Tensor x = wave;
  if (x.size(-1) < cfg.window_length) {
    x = torch::nn::functional::pad(
        x, torch::nn::functional::PadFuncOptions({0, cfg.window_length - x.size(-1)}));
  }
  auto window = Window(cfg, x.options());
  return torch::stft(x, cfg.fft_size, cfg.hop_length, cfg.window_length, window,
                     /*center=*/false, /*pad_mode=*/"reflect",
                     /*normalized=*/false, /*onesided=*/true,
                     /*return_complex=*/true);
}

torch::Tensor Magnitude(const torch::Tensor& complex_frames, double eps) {
  if (eps <= 0.0) return torch::abs(complex_frames);
  auto re = torch::real(complex_frames);
  auto im = torch::imag(complex_frames);
  return torch::sqrt(re * re + im * im + eps);
}

torch::Tensor FrameEnergy(const torch::Tensor& frames) {
  auto power = frames.is_complex() ? torch::real(frames * torch::conj(frames))
                                   : frames * frames;
  return torch::sqrt(power.sum(-2));
}

torch::Tensor MelFilterbank(int sample_rate, int fft_size, int n_mels,
                            double fmin, double fmax) {
  using Key = std::tuple<int, int, int, double, double>;
  static std::mutex mu;
  static std::map<Key, torch::Tensor> cache;
  Key key{sample_rate, fft_size, n_mels, fmin, fmax};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const int bins = fft_size / 2 + 1;
  std::vector<double> edges(n_mels + 2);
  const double mlo = HzToMel(fmin), mhi = HzToMel(fmax);
  for (int i = 0; i < n_mels + 2; ++i) {
    edges[i] = MelToHz(mlo + (mhi - mlo) * i / (n_mels + 1));
  }
  auto fb = torch::zeros({n_mels, bins}, torch::kDouble);
  auto acc = fb.accessor<double, 2>();
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[m], centre = edges[m + 1], hi = edges[m + 2];
    const double norm = 2.0 / (hi - lo);
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / fft_size;
      double w = 0.0;
      if (f > lo && f <= centre) w = (f - lo) / (centre - lo);
      else if (f > centre && f < hi) w = (hi - f) / (hi - centre);
      acc[m][k] = w * norm;
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, fb);
  return fb;
}

torch::Tensor LogMelSpectrogram(const torch::Tensor& wave,
                                const FeatureConfig& cfg, double eps) {
  auto mag = Magnitude(Stft(wave, cfg.stft), eps);
  auto fb = MelFilterbank(cfg.sample_rate, cfg.stft.fft_size, cfg.n_mels, 0.0,
                          cfg.sample_rate / 2.0)
                .to(mag.scalar_type());
  auto mel = torch::matmul(fb, mag);
  return torch::log(torch::clamp_min(mel, cfg.mel_floor));
}

F0Track ExtractF0(std::span<const float> samples, int sample_rate,
                  const StftConfig& stft, const F0Config& cfg) {
  stft.Validate();
  const double nyquist = sample_rate / 2.0;
  if (!(cfg.fmin > 0) || !(cfg.fmin < cfg.fmax) || cfg.fmax >= nyquist) {
    throw Error(ErrorCode::kConfigInvalid, "need 0 < fmin < fmax < nyquist");
  }
  const int wl = stft.window_length;
  const int tau_min = std::max(2, static_cast<int>(std::floor(sample_rate / cfg.fmax)));
  const int tau_max =
      std::min(wl / 2, static_cast<int>(std::ceil(sample_rate / cfg.fmin)) + 2);
  if (tau_min + 2 >= tau_max) {
    throw Error(ErrorCode::kConfigInvalid, "window too short for fmin");
  }
  const int width = wl - tau_max;
  const int64_t n = static_cast<int64_t>(samples.size());
  const int64_t frames =
      n < wl ? 1 : (n - wl) / stft.hop_length + 1;

  F0Track track;
  track.lf0.assign(frames, 0.0);
  track.voicing.assign(frames, 0);
  std::vector<double> x(wl), d(tau_max + 1), cmnd(tau_max + 1);
  for (int64_t t = 0; t < frames; ++t) {
    const int64_t start = t * stft.hop_length;
    double energy = 0.0;
    for (int j = 0; j < wl; ++j) {
      const int64_t idx = start + j;
      x[j] = idx < n ? samples[idx] : 0.0;
      energy += x[j] * x[j];
    }
    if (std::sqrt(energy / wl) < cfg.silence_rms) continue;

    d[0] = 0.0;
    for (int tau = 1; tau <= tau_max; ++tau) {
      double acc = 0.0;
      for (int j = 0; j < width; ++j) {
        const double diff = x[j] - x[j + tau];
        acc += diff * diff;
      }
      d[tau] = acc;
    }
    cmnd[0] = 1.0;
    double running = 0.0;
    for (int tau = 1; tau <= tau_max; ++tau) {
      running += d[tau];
      cmnd[tau] = running > 0.0 ? d[tau] * tau / running : 1.0;
    }
    int best = -1;
    for (int tau = tau_min; tau < tau_max; ++tau) {
      if (cmnd[tau] < cfg.threshold) {
        while (tau + 1 < tau_max && cmnd[tau + 1] < cmnd[tau]) ++tau;
        best = tau;
        break;
      }
    }
    if (best < 0) continue;
    double refined = best;
    const double a = cmnd[best - 1], b = cmnd[best], c = cmnd[best + 1];
    const double denom = a - 2.0 * b + c;
    if (denom > 0.0) refined += 0.5 * (a - c) / denom;
    const double f0 = sample_rate / refined;
    if (f0 < cfg.fmin || f0 > cfg.fmax) continue;
    track.lf0[t] = std::log(f0);
    track.voicing[t] = 1;
  }
  return track;
}

torch::Tensor WaveformTensor(const Waveform& wave, torch::Dtype dtype) {
  return torch::from_blob(const_cast<float*>(wave.samples.data()),
                          {static_cast<int64_t>(wave.samples.size())},
                          torch::kFloat)
      .to(dtype)
      .clone();
}

FrameFeatures ComputeFrameFeatures(const Waveform& wave,
                                   const FeatureConfig& cfg) {
  cfg.Validate();
  if (wave.samples.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "empty waveform");
  }
  if (wave.sample_rate != cfg.sample_rate) {
    throw Error(ErrorCode::kConfigInvalid,
                "waveform at " + std::to_string(wave.sample_rate) +
                    " Hz, features expect " + std::to_string(cfg.sample_rate));
  }
  torch::NoGradGuard no_grad;
  auto x = WaveformTensor(wave, torch::kDouble);
  auto spec = Stft(x, cfg.stft);
  FrameFeatures f;
  auto mag = Magnitude(spec);
  f.linear_spec = mag.to(torch::kFloat);
  f.energy = FrameEnergy(spec).to(torch::kFloat);
  auto fb = MelFilterbank(cfg.sample_rate, cfg.stft.fft_size, cfg.n_mels, 0.0,
                          cfg.sample_rate / 2.0);
  f.mel_spec = torch::log(torch::clamp_min(torch::matmul(fb, mag), cfg.mel_floor))
                   .to(torch::kFloat);
  auto track = ExtractF0(wave.samples, cfg.sample_rate, cfg.stft, cfg.f0);
  f.lf0 = torch::tensor(track.lf0, torch::kDouble).to(torch::kFloat);
  std::vector<float> voicing(track.voicing.begin(), track.voicing.end());
  f.voicing = torch::tensor(voicing, torch::kFloat);
  if (f.lf0.size(0) != f.energy.size(0)) {
    throw Error(ErrorCode::kShapeMismatch, "f0 and STFT frame counts differ");
  }
  return f;
}

}  // namespace svs
