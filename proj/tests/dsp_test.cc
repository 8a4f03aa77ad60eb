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

#include "torch_doctest.h"

#include <algorithm>
#include <cmath>

#include "svs/base/error.h"
#include "svs/base/hash.h"
#include "svs/dsp/features.h"
#include "test_util.h"

namespace svs {
namespace {

torch::Tensor Tensor(const std::vector<float>& x) {
  return torch::tensor(x, torch::kDouble);
}

TEST_CASE("stft of silence is zero") {
  StftConfig cfg;
  auto mag = Magnitude(Stft(torch::zeros({4096}, torch::kDouble), cfg));
  CHECK(mag.size(0) == 513);
  CHECK(mag.size(1) == 13);
  CHECK(mag.abs().max().item<double>() == 0.0);
}

TEST_CASE("stft frame count follows the window rule") {
  StftConfig cfg;
  CHECK(Stft(torch::ones({1024}, torch::kDouble), cfg).size(-1) == 1);
  CHECK(Stft(torch::ones({1023}, torch::kDouble), cfg).size(-1) == 1);
  CHECK(Stft(torch::ones({5120}, torch::kDouble), cfg).size(-1) == 17);
  CHECK(Stft(torch::ones({2, 5120}, torch::kDouble), cfg).sizes() ==
        torch::IntArrayRef({2, 513, 17}));
  StftConfig bad;
  bad.hop_length = 2048;
  CHECK_THROWS_AS(Stft(torch::ones({4096}), bad), Error);
}

TEST_CASE("bin-centred sinusoid concentrates in its bin") {
  const int k = 20;
  const double hz = k * 24000.0 / 1024.0;
  auto x = Tensor(testing::Sine(hz, 0.2, 24000));
  // Rectangular window: a whole number of periods lands in one bin.
  StftConfig rect;
  rect.window = "rect";
  auto p = Magnitude(Stft(x, rect)).pow(2).select(1, 2);
  CHECK(p[k].item<double>() / p.sum().item<double>() > 0.9);
  // Hann: the main lobe spans bins k-1..k+1 (weights 1/4, 1/2, 1/4).
  StftConfig hann;
  auto q = Magnitude(Stft(x, hann)).pow(2).select(1, 2);
  const double lobe = q.slice(0, k - 1, k + 2).sum().item<double>();
  CHECK(lobe / q.sum().item<double>() > 0.9);
  CHECK(q[k].item<double>() / q.sum().item<double>() ==
        doctest::Approx(0.25 / (0.25 + 2 * 0.0625)).epsilon(1e-3));
}

TEST_CASE("stft is linear in gain") {
  SplitMix64 rng(9);
  std::vector<float> noise(8000);
  for (auto& v : noise) v = static_cast<float>(rng.Uniform() - 0.5);
  auto x = Tensor(noise);
  StftConfig cfg;
  auto a = Magnitude(Stft(x, cfg));
  auto b = Magnitude(Stft(x * 0.5, cfg));
  CHECK(((b - 0.5 * a).abs() / (0.5 * a + 1e-12)).max().item<double>() < 1e-6);
}

TEST_CASE("frame energy") {
  CHECK(FrameEnergy(torch::zeros({513, 1}, torch::kDouble)).item<double>() == 0.0);
  auto one = torch::zeros({513, 1}, torch::kDouble);
  one[7][0] = 3.0;
  CHECK(FrameEnergy(one).item<double>() == 3.0);
  auto c = torch::complex(torch::zeros({513, 1}, torch::kDouble),
                          torch::zeros({513, 1}, torch::kDouble));
  c[5][0] = c10::complex<double>(3.0, 4.0);
  CHECK(FrameEnergy(c).item<double>() == doctest::Approx(5.0));

  SplitMix64 rng(11);
  auto frames = torch::empty({513, 50}, torch::kDouble);
  auto acc = frames.accessor<double, 2>();
  for (int k = 0; k < 513; ++k)
    for (int t = 0; t < 50; ++t) acc[k][t] = rng.Gaussian();
  auto energy = FrameEnergy(frames);
  for (int t = 0; t < 50; ++t) {
    double sum = 0.0;
    for (int k = 0; k < 513; ++k) sum += acc[k][t] * acc[k][t];
    const double ref = std::sqrt(sum);
    CHECK(std::abs(energy[t].item<double>() - ref) / ref < 1e-6);
  }
}

TEST_CASE("f0 of sinusoids") {
  StftConfig stft;
  F0Config cfg;
  auto a = ExtractF0(testing::Sine(440.0, 0.5, 24000), 24000, stft, cfg);
  auto b = ExtractF0(testing::Sine(220.0, 0.5, 24000), 24000, stft, cfg);
  REQUIRE(a.lf0.size() == static_cast<size_t>((12000 - 1024) / 256 + 1));
  for (size_t t = 1; t + 1 < a.lf0.size(); ++t) {
    CHECK(a.voicing[t] == 1);
    CHECK(std::abs(a.lf0[t] - std::log(440.0)) < 0.01);
    CHECK(std::abs((a.lf0[t] - b.lf0[t]) - std::log(2.0)) < 0.01);
  }
}

TEST_CASE("f0 of silence is unvoiced") {
  auto track = ExtractF0(std::vector<float>(12000, 0.0f), 24000, StftConfig{}, F0Config{});
  for (size_t t = 0; t < track.voicing.size(); ++t) {
    CHECK(track.voicing[t] == 0);
    CHECK(track.lf0[t] == 0.0);
  }
}

TEST_CASE("f0 sweep across the search range") {
  StftConfig stft;
  F0Config cfg;
  std::vector<double> errors;
  for (double hz = cfg.fmin + 1.0; hz < cfg.fmax; hz *= 1.07) {
    auto track = ExtractF0(testing::Sine(hz, 0.3, 24000), 24000, stft, cfg);
    for (size_t t = 0; t < track.lf0.size(); ++t) {
      if (track.voicing[t]) errors.push_back(std::abs(std::exp(track.lf0[t]) - hz));
      else errors.push_back(hz);
    }
  }
  std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
  CHECK(errors[errors.size() / 2] < 2.0);
}

TEST_CASE("f0 rejects bad ranges") {
  CHECK_THROWS_AS(ExtractF0(std::vector<float>(4096), 24000, StftConfig{},
                            F0Config{500.0, 400.0}),
                  Error);
  CHECK_THROWS_AS(ExtractF0(std::vector<float>(4096), 24000, StftConfig{},
                            F0Config{80.0, 13000.0}),
                  Error);
}

TEST_CASE("mel spectrogram") {
  FeatureConfig cfg;
  auto zero = LogMelSpectrogram(torch::zeros({6000}, torch::kDouble), cfg);
  CHECK(zero.size(0) == 80);
  CHECK((zero - std::log(cfg.mel_floor)).abs().max().item<double>() == 0.0);

  SplitMix64 rng(5);
  std::vector<float> noise(24000 * 4);
  for (auto& v : noise) v = static_cast<float>(rng.Gaussian() * 0.1);
  auto x = Tensor(noise);
  double prev = -1.0;
  for (double gain : {0.1, 0.5, 1.0, 2.0}) {
    const double total = LogMelSpectrogram(x * gain, cfg).exp().sum().item<double>();
    CHECK(total > prev);
    prev = total;
  }
  // White noise: averaged band magnitudes stay within 20 dB of each other.
  auto bands = LogMelSpectrogram(x, cfg).exp().mean(1);
  const double spread_db =
      20.0 * std::log10(bands.max().item<double>() / bands.min().item<double>());
  CHECK(spread_db < 20.0);
}

TEST_CASE("frame features share one frame count") {
  Waveform w;
  w.samples = testing::Sine(330.0, 1.0, 24000);
  FeatureConfig cfg;
  auto f = ComputeFrameFeatures(w, cfg);
  const int64_t t = f.num_frames();
  CHECK(t == (24000 - 1024) / 256 + 1);
  CHECK(f.linear_spec.size(1) == t);
  CHECK(f.mel_spec.size(1) == t);
  CHECK(f.lf0.size(0) == t);
  CHECK(f.voicing.size(0) == t);
  CHECK(f.energy.min().item<float>() >= 0.0f);
  CHECK((f.lf0.masked_select(f.voicing > 0.5) > 0).all().item<bool>());
  Waveform wrong = w;
  wrong.sample_rate = 44100;
  CHECK_THROWS_AS(ComputeFrameFeatures(wrong, cfg), Error);
}

}  // namespace
}  // namespace svs
