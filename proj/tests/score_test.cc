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

#include <cmath>
#include <filesystem>
#include <numeric>

#include "doctest.h"
#include "svs/base/error.h"
#include "svs/base/hash.h"
#include "svs/corpus/audio.h"
#include "svs/corpus/fixture.h"
#include "svs/corpus/transcription.h"
#include "svs/score/score.h"
#include "test_util.h"

namespace svs {
namespace {

// Counts frames t >= 0 whose window [t*hl, t*hl + wl) fits in n samples.
int64_t EnumerateFrames(int64_t n, int wl, int hl) {
  int64_t count = 0;
  for (int64_t t = 0; t * hl + wl <= n; ++t) ++count;
  return std::max<int64_t>(count, 1);
}

TEST_CASE("pitch id to frequency") {
  CHECK(PitchIdToFrequency(69) == 440.0);
  CHECK(PitchIdToFrequency(57) == 220.0);
  CHECK(PitchIdToFrequency(60) == doctest::Approx(261.6256).epsilon(1e-3 / 261.6256));
  for (int p = 0; p <= 127; ++p) {
    const double ref = 440.0 * std::pow(2.0, (p - 69) / 12.0);
    CHECK(std::abs(PitchIdToFrequency(p) - ref) / ref < 1e-9);
  }
  CHECK_THROWS_AS(PitchIdToFrequency(128), Error);
  CHECK_THROWS_AS(PitchIdToFrequency(-1), Error);
}

TEST_CASE("lf0 of pitch") {
  CHECK(Lf0OfPitch(69) == doctest::Approx(6.0868).epsilon(1e-4));
  CHECK(Lf0OfPitch(81) - Lf0OfPitch(69) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  try {
    Lf0OfPitch(kRestPitch);
    FAIL("expected RestPitch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRestPitch);
  }
}

TEST_CASE("frames for duration") {
  CHECK(FramesForDuration(5120.0 / 24000.0, 24000, 1024, 256) == 17);
  CHECK(FramesForDuration(1024.0 / 24000.0, 24000, 1024, 256) == 1);
  CHECK(FramesForDuration(1023.0 / 24000.0, 24000, 1024, 256) == 1);
  SplitMix64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const int sr = std::array{16000, 22050, 24000, 44100}[rng.Below(4)];
    const int hl = 64 << rng.Below(3);
    const int wl = hl * (1 + static_cast<int>(rng.Below(4)));
    const int64_t n = static_cast<int64_t>(rng.Below(200000));
    CHECK(FramesForDuration(static_cast<double>(n) / sr, sr, wl, hl) ==
          EnumerateFrames(n, wl, hl));
  }
}

TEST_CASE("frames for duration is monotone") {
  int64_t prev = 0;
  for (int n = 0; n < 20000; n += 7) {
    const int64_t f = FramesForDuration(n / 24000.0, 24000, 1024, 256);
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("quantizer edges and midpoint") {
  QuantizerSpec q{256, -2.0, 6.0};
  CHECK(Quantize(-2.0, q) == 0);
  CHECK(Quantize(6.0, q) == 255);
  CHECK(Quantize(2.0, q) == 128);
  CHECK(Quantize(-100.0, q) == 0);
  CHECK(Quantize(100.0, q) == 255);
  CHECK(Quantize(std::nan(""), q) == 0);
  CHECK_THROWS_AS((QuantizerSpec{256, 1.0, 1.0}.Validate()), Error);
  CHECK_THROWS_AS((QuantizerSpec{1, 0.0, 1.0}.Validate()), Error);
}

TEST_CASE("quantizer is monotone and inverse-consistent") {
  QuantizerSpec q{256, -11.5, 5.0};
  SplitMix64 rng(3);
  std::vector<double> v(5000);
  for (auto& x : v) x = q.lo + rng.Uniform() * (q.hi - q.lo);
  std::sort(v.begin(), v.end());
  int prev = -1;
  for (double x : v) {
    const int b = Quantize(x, q);
    CHECK(b >= prev);
    prev = b;
    CHECK(std::abs(Dequantize(b, q) - x) <= q.bin_width());
  }
}

TEST_CASE("pitch quantizer reserves a rest bin") {
  auto pq = PitchQuantizer::Default();
  CHECK(pq.table_size() == 257);
  CHECK(pq.Quantize(0.0) == 256);
  CHECK(pq.Quantize(Lf0OfPitch(30)) == 0);
  CHECK(pq.Quantize(Lf0OfPitch(100)) == 255);
  CHECK(pq.Quantize(Lf0OfPitch(65)) > pq.Quantize(Lf0OfPitch(64)));
}

PhonemeDict SmallDict() {
  return PhonemeDict::FromEntries({{"shi", {"sh", "i"}}, {"a", {"a"}}});
}

TEST_CASE("score features") {
  auto dict = SmallDict();
  auto vocab = PhonemeVocabulary::FromDict(dict);
  CHECK(vocab.Id("SP") == 1);
  CHECK(vocab.Id("AP") == 2);
  CHECK_THROWS_AS(vocab.Id("<pad>"), Error);
  auto utt = ParseTranscription(
      "u|是啊|sh i SP a|C4 C4 rest A4|0.5 0.5 0.2 0.4|0.1 0.4 0.2 0.4|0 0 0 1",
      dict);
  StftConfig stft;
  auto f = BuildScoreFeatures(utt, vocab, 24000, stft);
  CHECK(f.size() == 4);
  CHECK(f.note_frame_counts.size() == 4);
  CHECK(f.note_pitch_ids[2] == kRestPitch);
  CHECK(f.note_lf0[2] == 0.0);
  CHECK(f.note_lf0[3] == std::log(440.0));
  CHECK(f.note_frame_counts[0] == EnumerateFrames(12000, 1024, 256));
  CHECK(f.slur_ids[3] == 1);

  PhonemeVocabulary other(std::vector<std::string>{"<pad>", "SP", "AP", "a"});
  CHECK_THROWS_AS(BuildScoreFeatures(utt, other, 24000, stft), Error);
}

TEST_CASE("phoneme frame durations partition the utterance") {
  auto utt = ParseTranscription(
      "u|是啊|sh i SP a|C4 C4 rest A4|0.5 0.5 0.2 0.4|0.1 0.4 0.2 0.4|0 0 0 0",
      SmallDict());
  StftConfig stft;
  const int64_t total = EnumerateFrames(static_cast<int64_t>(1.1 * 24000), 1024, 256);
  auto d = PhonemeFrameDurations(utt, 24000, stft, total);
  CHECK(std::accumulate(d.begin(), d.end(), int64_t{0}) == total);
  for (auto x : d) CHECK(x >= 1);
  // First boundary: frames completed within the first 0.1 s (2400 samples).
  CHECK(d[0] == EnumerateFrames(2400, 1024, 256));
  CHECK_THROWS_AS(PhonemeFrameDurations(utt, 24000, stft, 3), Error);
  // Tiny phonemes still get one frame each.
  utt.phoneme_durations_sec = {0.001, 0.001, 0.001, 1.097};
  d = PhonemeFrameDurations(utt, 24000, stft, total);
  CHECK(d[0] == 1);
  CHECK(d[1] == 1);
  CHECK(std::accumulate(d.begin(), d.end(), int64_t{0}) == total);
}

// Per-note framing drops (wl - hl) / hl = 3 frames at every boundary relative
// to framing the whole waveform, with up to one frame of floor slack per note.
TEST_CASE("summed note frames versus waveform framing") {
  testing::TempDir dir("score_fixture");
  FixtureOptions opts;
  opts.num_utterances = 10;
  WriteSyntheticCorpus(dir.str(), opts);
  auto dict = PhonemeDict::Load((dir.path() / "opencpop-strict.txt").string());
  auto vocab = PhonemeVocabulary::FromDict(dict);
  StftConfig stft;
  for (const auto& e : LoadTranscriptions(
           (dir.path() / "segments" / "transcriptions.txt").string(), dict)) {
    const auto& utt = *e.utterance;
    auto wave = IngestAudio(
        (dir.path() / "segments" / "wavs" / (utt.id + ".wav")).string(), 24000);
    const int64_t total = EnumerateFrames(wave.samples.size(), 1024, 256);
    int64_t summed = 0;
    for (double d : utt.phoneme_durations_sec) {
      summed += FramesForDuration(d, 24000, 1024, 256);
    }
    const int64_t boundaries = static_cast<int64_t>(utt.size()) - 1;
    const int64_t deficit = total - summed;
    CHECK(std::abs(deficit - 3 * boundaries) <= static_cast<int64_t>(utt.size()));
    auto f = BuildScoreFeatures(utt, vocab, 24000, stft);
    CHECK(f.size() == utt.size());
  }
}

}  // namespace
}  // namespace svs
