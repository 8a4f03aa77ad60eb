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

#include "svs/corpus/fixture.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "svs/base/error.h"
#include "svs/base/hash.h"
#include "svs/corpus/audio.h"
#include "svs/corpus/lexicon.h"
#include "svs/corpus/transcription.h"

namespace svs {

namespace {

struct Word {
  const char* character;
  std::vector<std::string> readings;
};

// A small lyric vocabulary; 长 and 了 are polyphonic.
const std::vector<Word>& Vocabulary() {
  static const std::vector<Word> kWords = {
      {"我", {"wo"}},   {"你", {"ni"}},   {"他", {"ta"}},
      {"爱", {"ai"}},   {"的", {"de"}},   {"一", {"yi"}},
      {"心", {"xin"}},  {"天", {"tian"}}, {"月", {"yue"}},
      {"风", {"feng"}}, {"花", {"hua"}},  {"梦", {"meng"}},
      {"光", {"guang"}}, {"星", {"xing"}}, {"海", {"hai"}},
      {"雨", {"yu"}},   {"长", {"chang", "zhang"}},
      {"了", {"le", "liao"}}, {"好", {"hao"}}, {"安", {"an"}},
      {"啊", {"a"}},    {"说", {"shuo"}}, {"走", {"zou"}},
      {"来", {"lai"}},
  };
  return kWords;
}

const std::map<std::string, std::vector<std::string>>& PinyinTable() {
  static const std::map<std::string, std::vector<std::string>> kTable = {
      {"wo", {"w", "o"}},     {"ni", {"n", "i"}},      {"ta", {"t", "a"}},
      {"ai", {"ai"}},         {"de", {"d", "e"}},      {"yi", {"y", "i"}},
      {"xin", {"x", "in"}},   {"tian", {"t", "ian"}},  {"yue", {"y", "ve"}},
      {"feng", {"f", "eng"}}, {"hua", {"h", "ua"}},    {"meng", {"m", "eng"}},
      {"guang", {"g", "uang"}}, {"xing", {"x", "ing"}}, {"hai", {"h", "ai"}},
      {"yu", {"y", "v"}},     {"chang", {"ch", "ang"}}, {"zhang", {"zh", "ang"}},
      {"le", {"l", "e"}},     {"liao", {"l", "iao"}},  {"hao", {"h", "ao"}},
      {"an", {"an"}},         {"a", {"a"}},            {"shuo", {"sh", "uo"}},
      {"zou", {"z", "ou"}},   {"lai", {"l", "ai"}},
  };
  return kTable;
}

bool IsVowel(const std::string& ph) {
  static const char* kInitials[] = {"b", "p", "m", "f", "d", "t", "n", "l",
                                    "g", "k", "h", "j", "q", "x", "zh", "ch",
                                    "sh", "r", "z", "c", "s", "y", "w"};
  for (const char* i : kInitials) {
    if (ph == i) return false;
  }
  return true;
}

bool IsVoicedInitial(const std::string& ph) {
  return ph == "m" || ph == "n" || ph == "l" || ph == "y" || ph == "w" ||
         ph == "r";
}

// Two-formant envelope per phoneme, derived from the phoneme string so the
// table stays implicit.
std::pair<double, double> Formants(const std::string& ph) {
  if (IsVoicedInitial(ph)) return {300.0, 1100.0};
  const char c = ph.back();
  switch (c) {
    case 'a': return {800.0, 1250.0};
    case 'o': return {520.0, 900.0};
    case 'e': return {500.0, 1500.0};
    case 'i': return {300.0, 2300.0};
    case 'u': return {330.0, 800.0};
    case 'v': return {300.0, 1900.0};
    case 'n': return {420.0, 1700.0};
    case 'g': return {650.0, 1100.0};
    default: return {600.0, 1400.0};
  }
}

struct Segment {
  std::string phoneme;
  int midi = kRestPitch;
  double note_sec = 0.0;
  double phone_sec = 0.0;
  int slur = 0;
  double gain = 1.0;
};

double Round5(double x) { return std::round(x * 1e5) / 1e5; }

std::vector<Segment> ComposeUtterance(SplitMix64& rng,
                                      std::vector<std::string>* text,
                                      const FixtureOptions& opts) {
  const auto& vocab = Vocabulary();
  const int n_words =
      opts.min_words + static_cast<int>(rng.Below(opts.max_words - opts.min_words + 1));
  std::vector<Segment> segs;
  int midi = 60 + static_cast<int>(rng.Below(8));
  if (rng.Uniform() < 0.5) {
    segs.push_back({"AP", kRestPitch, 0, Round5(0.12 + 0.1 * rng.Uniform()), 0, 1.0});
  }
  for (int w = 0; w < n_words; ++w) {
    const Word& word = vocab[rng.Below(vocab.size())];
    text->push_back(word.character);
    const std::string& reading =
        word.readings[rng.Below(word.readings.size())];
    const auto& phs = PinyinTable().at(reading);
    midi = std::clamp(midi + static_cast<int>(rng.Below(7)) - 3, 57, 72);
    const double note = Round5(0.28 + 0.3 * rng.Uniform());
    const double gain = 0.6 + 0.4 * rng.Uniform();
    double remaining = note;
    for (size_t k = 0; k < phs.size(); ++k) {
      Segment s{phs[k], midi, note, 0.0, 0, gain};
      if (k + 1 < phs.size()) {
        s.phone_sec = Round5(0.05 + 0.04 * rng.Uniform());
        remaining -= s.phone_sec;
      } else {
        s.phone_sec = Round5(remaining);
      }
      segs.push_back(s);
    }
    // Melisma: the final is sung again on a neighbouring note.
    if (rng.Uniform() < 0.25) {
      const int slur_midi = std::clamp(midi + (rng.Uniform() < 0.5 ? 2 : -2), 57, 72);
      const double slur_note = Round5(0.2 + 0.15 * rng.Uniform());
      segs.push_back({phs.back(), slur_midi, slur_note, slur_note, 1, gain});
      midi = slur_midi;
    }
    if (w + 1 < n_words && rng.Uniform() < 0.2) {
      segs.push_back({"AP", kRestPitch, 0, Round5(0.1 + 0.1 * rng.Uniform()), 0, 1.0});
    }
  }
  segs.push_back({"SP", kRestPitch, 0, Round5(0.15 + 0.1 * rng.Uniform()), 0, 1.0});
  for (auto& s : segs) {
    if (s.midi == kRestPitch) s.note_sec = s.phone_sec;
  }
  return segs;
}

std::vector<float> Render(const std::vector<Segment>& segs, int sr,
                          SplitMix64& rng) {
  std::vector<int64_t> bounds = {0};
  double t = 0.0;
  for (const auto& s : segs) {
    t += s.phone_sec;
    bounds.push_back(std::llround(t * sr));
  }
  const int64_t total = bounds.back();
  std::vector<double> out(total, 0.0);

  // Per-sample target f0 (0 when unvoiced), gain and formants, then smoothed.
  std::vector<double> f0(total, 0.0), amp(total, 0.0), f1(total, 600.0),
      f2(total, 1400.0), noise(total, 0.0);
  for (size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const int64_t b = bounds[i], e = bounds[i + 1];
    const bool rest = s.phoneme == "SP" || s.phoneme == "AP";
    const bool vowel = !rest && IsVowel(s.phoneme);
    const bool voiced = vowel || (!rest && IsVoicedInitial(s.phoneme));
    auto [fa, fb] = Formants(s.phoneme);
    const double hz = 440.0 * std::pow(2.0, (s.midi - 69) / 12.0);
    for (int64_t n = b; n < e; ++n) {
      const double local = static_cast<double>(n - b) / sr;
      if (voiced) {
        const double vib = local > 0.15 ? 0.25 * std::sin(2 * M_PI * 5.5 * local) : 0.0;
        f0[n] = hz * std::pow(2.0, vib / 12.0);
        // Slow decrescendo over long tones.
        amp[n] = s.gain * (vowel ? 1.0 : 0.45) * (1.0 - 0.25 * local / std::max(s.phone_sec, 1e-3));
      }
      f1[n] = fa;
      f2[n] = fb;
      if (s.phoneme == "AP") noise[n] = 0.03;
      if (!rest && !voiced) noise[n] = 0.12 * s.gain;
    }
  }
  // One-pole smoothing of control tracks gives portamento and soft onsets.
  const double a_fast = std::exp(-1.0 / (0.008 * sr));
  const double a_slow = std::exp(-1.0 / (0.025 * sr));
  double sf0 = 0.0, samp = 0.0, sf1 = f1.empty() ? 600 : f1[0],
         sf2 = f2.empty() ? 1400 : f2[0], snoise = 0.0;
  double phase = 0.0;
  double lp = 0.0;
  for (int64_t n = 0; n < total; ++n) {
    if (f0[n] > 0.0) {
      sf0 = sf0 > 0.0 ? a_slow * sf0 + (1 - a_slow) * f0[n] : f0[n];
    }
    samp = a_fast * samp + (1 - a_fast) * amp[n];
    sf1 = a_slow * sf1 + (1 - a_slow) * f1[n];
    sf2 = a_slow * sf2 + (1 - a_slow) * f2[n];
    snoise = a_fast * snoise + (1 - a_fast) * noise[n];
    double v = 0.0;
    if (samp > 1e-4 && sf0 > 0.0) {
      phase += 2.0 * M_PI * sf0 / sr;
      if (phase > 2.0 * M_PI) phase -= 2.0 * M_PI;
      const int n_harm = std::min(40, static_cast<int>(0.45 * sr / sf0));
      for (int k = 1; k <= n_harm; ++k) {
        const double fk = k * sf0;
        const double r1 = 1.0 / (1.0 + std::pow((fk - sf1) / 120.0, 2));
        const double r2 = 0.6 / (1.0 + std::pow((fk - sf2) / 180.0, 2));
        const double tilt = 1.0 / std::pow(k, 1.2);
        v += (0.15 * tilt + r1 + r2) * tilt * std::sin(k * phase);
      }
      v *= samp;
    }
    // High-passed noise for fricatives and breath.
    const double white = 2.0 * rng.Uniform() - 1.0;
    lp = 0.7 * lp + 0.3 * white;
    v += snoise * (white - lp);
    out[n] = v;
  }
  double peak = 1e-9;
  for (double v : out) peak = std::max(peak, std::abs(v));
  std::vector<float> samples(total);
  for (int64_t n = 0; n < total; ++n) {
    samples[n] = static_cast<float>(0.7 * out[n] / peak);
  }
  return samples;
}

}  // namespace

void WriteSyntheticCorpus(const std::string& dir, const FixtureOptions& opts) {
  namespace fs = std::filesystem;
  if (opts.min_words < 1 || opts.max_words < opts.min_words ||
      opts.num_utterances < 1) {
    throw Error(ErrorCode::kConfigInvalid, "bad fixture options");
  }
  const fs::path root(dir);
  fs::create_directories(root / "segments" / "wavs");

  PhonemeDict::FromEntries(PinyinTable()).Save((root / "opencpop-strict.txt").string());
  PinyinLexicon lexicon;
  for (const auto& w : Vocabulary()) lexicon.Add(w.character, w.readings);
  lexicon.Save((root / "lexicon.txt").string());

  SplitMix64 rng(opts.seed);
  std::ofstream trans(root / "segments" / "transcriptions.txt");
  if (!trans) throw Error(ErrorCode::kWriteFailure, "cannot write transcriptions");
  for (int u = 0; u < opts.num_utterances; ++u) {
    Utterance utt;
    char id[32];
    std::snprintf(id, sizeof(id), "9%03d%06d", u / 100 + 1, u);
    utt.id = id;
    auto segs = ComposeUtterance(rng, &utt.text, opts);
    for (const auto& s : segs) {
      utt.phonemes.push_back(s.phoneme);
      utt.note_pitches.push_back(s.midi);
      utt.note_durations_sec.push_back(s.note_sec);
      utt.phoneme_durations_sec.push_back(s.phone_sec);
      utt.slur_flags.push_back(s.slur);
    }
    utt.Validate();
    trans << SerializeTranscription(utt) << '\n';
    Waveform wave;
    wave.sample_rate = opts.sample_rate;
    wave.samples = Render(segs, opts.sample_rate, rng);
    WriteWav((root / "segments" / "wavs" / (utt.id + ".wav")).string(), wave);
  }
}

}  // namespace svs
