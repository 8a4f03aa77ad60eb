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

#include "svs/corpus/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>

#include "svs/base/error.h"

namespace svs {

namespace {

uint32_t ReadU32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char* p) { return p[0] | (p[1] << 8); }

void PutU32(std::string& s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s += static_cast<char>((v >> (8 * i)) & 0xFF);
}

void PutU16(std::string& s, uint16_t v) {
  s += static_cast<char>(v & 0xFF);
  s += static_cast<char>((v >> 8) & 0xFF);
}

// Zeroth-order modified Bessel function of the first kind.
double BesselI0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

Waveform ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUnreadableAudio, "cannot open " + path);
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kUnreadableAudio, path + ": not a RIFF/WAVE file");
  }
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const unsigned char* pcm = nullptr;
  size_t pcm_bytes = 0;
  size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const unsigned char* chunk = data.data() + pos;
    uint32_t size = ReadU32(chunk + 4);
    size_t body = pos + 8;
    if (body + size > data.size()) size = static_cast<uint32_t>(data.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && size >= 16) {
      format = ReadU16(data.data() + body);
      channels = ReadU16(data.data() + body + 2);
      rate = ReadU32(data.data() + body + 4);
      bits = ReadU16(data.data() + body + 14);
      if (format == 0xFFFE && size >= 26) {
        format = ReadU16(data.data() + body + 24);  // WAVE_FORMAT_EXTENSIBLE
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      pcm = data.data() + body;
      pcm_bytes = size;
    }
    pos = body + size + (size & 1);
  }
  if (pcm == nullptr || channels == 0 || rate == 0) {
    throw Error(ErrorCode::kUnreadableAudio, path + ": missing fmt/data chunk");
  }
  const bool is_float = format == 3 && bits == 32;
  const bool is_pcm = format == 1 && (bits == 16 || bits == 24 || bits == 32);
  if (!is_float && !is_pcm) {
    throw Error(ErrorCode::kUnreadableAudio,
                path + ": unsupported sample format " + std::to_string(format) +
                    "/" + std::to_string(bits) + " bit");
  }
  const size_t bytes_per_sample = bits / 8;
  const size_t frames = pcm_bytes / (bytes_per_sample * channels);
  Waveform wave;
  wave.sample_rate = static_cast<int>(rate);
  wave.samples.resize(frames);
  for (size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (size_t c = 0; c < channels; ++c) {
      const unsigned char* p = pcm + (f * channels + c) * bytes_per_sample;
      double v = 0.0;
      if (is_float) {
        float x;
        std::memcpy(&x, p, 4);
        v = x;
      } else if (bits == 16) {
        v = static_cast<int16_t>(ReadU16(p)) / 32768.0;
      } else if (bits == 24) {
        int32_t x = (p[0] << 8) | (p[1] << 16) | (p[2] << 24);
        v = (x >> 8) / 8388608.0;
      } else {
        v = static_cast<int32_t>(ReadU32(p)) / 2147483648.0;
      }
      acc += v;
    }
    wave.samples[f] = static_cast<float>(acc / channels);
  }
  if (wave.samples.empty()) {
    throw Error(ErrorCode::kUnreadableAudio, path + ": no samples");
  }
  return wave;
}

void WriteWav(const std::string& path, const Waveform& wave) {
  const uint32_t n = static_cast<uint32_t>(wave.samples.size());
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  PutU32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, static_cast<uint32_t>(wave.sample_rate));
  PutU32(out, static_cast<uint32_t>(wave.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, 2 * n);
  for (float s : wave.samples) {
    double v = std::clamp(static_cast<double>(s), -1.0, 1.0) * 32767.0;
    PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(std::lround(v))));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
    throw Error(ErrorCode::kWriteFailure, "cannot write " + path);
  }
}

Resampler::Resampler(int source_rate, int target_rate, int zero_crossings,
                     double rolloff, double kaiser_beta) {
  if (source_rate <= 0 || target_rate <= 0) {
    throw Error(ErrorCode::kUnsupportedRate,
                std::to_string(source_rate) + " -> " +
                    std::to_string(target_rate));
  }
  const int g = std::gcd(source_rate, target_rate);
  up_ = target_rate / g;
  down_ = source_rate / g;
  if (up_ > kMaxFactor || down_ > kMaxFactor) {
    throw Error(ErrorCode::kUnsupportedRate,
                "ratio " + std::to_string(up_) + "/" + std::to_string(down_) +
                    " too fine for the polyphase bank");
  }
  // Cutoff in cycles per input sample.
  const double cutoff = 0.5 * std::min(1.0, static_cast<double>(up_) / down_) *
                        rolloff;
  const double half_width = zero_crossings / (2.0 * cutoff);
  half_taps_ = static_cast<int>(std::ceil(half_width));
  const double i0_beta = BesselI0(kaiser_beta);
  bank_.assign(up_, std::vector<float>(2 * half_taps_));
  for (int phase = 0; phase < up_; ++phase) {
    // Output sample sits `frac` input samples after its base input index.
    const double frac = static_cast<double>(phase) / up_;
    auto& taps = bank_[phase];
    double sum = 0.0;
    for (int k = 0; k < 2 * half_taps_; ++k) {
      const double x = (k - half_taps_ + 1) - frac;
      double w = 0.0;
      if (std::abs(x) < half_width) {
        const double r = x / half_width;
        const double kaiser = BesselI0(kaiser_beta * std::sqrt(1.0 - r * r)) / i0_beta;
        const double arg = 2.0 * cutoff * x;
        const double sinc = arg == 0.0 ? 1.0 : std::sin(M_PI * arg) / (M_PI * arg);
        w = 2.0 * cutoff * sinc * kaiser;
      }
      taps[k] = static_cast<float>(w);
      sum += w;
    }
    // Unity DC gain per phase.
    for (auto& t : taps) t = static_cast<float>(t / sum);
  }
}

std::vector<float> Resampler::Process(std::span<const float> input) const {
  if (up_ == down_) return {input.begin(), input.end()};
  const int64_t n_in = static_cast<int64_t>(input.size());
  const int64_t n_out = (n_in * up_ + down_ - 1) / down_;
  std::vector<float> out(n_out);
  for (int64_t n = 0; n < n_out; ++n) {
    const int64_t num = n * down_;
    const int64_t base = num / up_;
    const int phase = static_cast<int>(num % up_);
    const auto& taps = bank_[phase];
    double acc = 0.0;
    const int64_t first = base - half_taps_ + 1;
    for (int k = 0; k < 2 * half_taps_; ++k) {
      const int64_t idx = first + k;
      if (idx < 0 || idx >= n_in) continue;
      acc += static_cast<double>(taps[k]) * input[idx];
    }
    out[n] = static_cast<float>(std::clamp(acc, -1.0, 1.0));
  }
  return out;
}

Waveform ResampleWaveform(const Waveform& wave, int target_rate) {
  if (wave.sample_rate == target_rate) return wave;
  Resampler resampler(wave.sample_rate, target_rate);
  Waveform out;
  out.sample_rate = target_rate;
  out.samples = resampler.Process(wave.samples);
  return out;
}

Waveform IngestAudio(const std::string& path, int target_rate) {
  Waveform wave = ReadWav(path);
  Waveform out = ResampleWaveform(wave, target_rate);
  for (auto& s : out.samples) s = std::clamp(s, -1.0f, 1.0f);
  return out;
}

}  // namespace svs
