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

#include "svs/corpus/transcription.h"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "svs/base/utf8.h"

namespace svs {

namespace {

constexpr std::array<std::string_view, 12> kNoteNames = {
    "C",       "C#4/Db4", "D",       "D#4/Eb4", "E",       "F",
    "F#4/Gb4", "G",       "G#4/Ab4", "A",       "A#4/Bb4", "B"};

std::vector<std::string_view> SplitChar(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double ParseDuration(const std::string& token, const std::string& id) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kMalformedLine,
                id + ": bad duration '" + token + "'");
  }
  return v;
}

std::string FormatDouble(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

template <typename T, typename F>
std::string Join(const std::vector<T>& values, F&& fmt) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += fmt(values[i]);
  }
  return out;
}

}  // namespace

int NoteNameToMidi(std::string_view name) {
  if (name == "rest") return kRestPitch;
  // Alias after '/' names the same pitch.
  std::string_view primary = name.substr(0, name.find('/'));
  if (primary.empty()) {
    throw Error(ErrorCode::kMalformedLine, "empty note name");
  }
  static constexpr int kLetterSemitone[7] = {9, 11, 0, 2, 4, 5, 7};  // A..G
  char letter = primary[0];
  if (letter < 'A' || letter > 'G') {
    throw Error(ErrorCode::kMalformedLine,
                "bad note name '" + std::string(name) + "'");
  }
  int semitone = kLetterSemitone[letter - 'A'];
  size_t pos = 1;
  if (pos < primary.size() && (primary[pos] == '#' || primary[pos] == 'b')) {
    semitone += primary[pos] == '#' ? 1 : -1;
    ++pos;
  }
  int octave = 0;
  auto sv = primary.substr(pos);
  auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), octave);
  if (sv.empty() || ec != std::errc() || ptr != sv.data() + sv.size()) {
    throw Error(ErrorCode::kMalformedLine,
                "bad octave in note '" + std::string(name) + "'");
  }
  int midi = (octave + 1) * 12 + semitone;
  if (midi < 0 || midi > 127) {
    throw Error(ErrorCode::kMalformedLine,
                "note outside MIDI range '" + std::string(name) + "'");
  }
  return midi;
}

std::string MidiToNoteName(int midi) {
  if (midi == kRestPitch) return "rest";
  if (midi < 0 || midi > 127) {
    throw Error(ErrorCode::kPitchOutOfRange, std::to_string(midi));
  }
  int octave = midi / 12 - 1;
  int semitone = midi % 12;
  std::string_view name = kNoteNames[semitone];
  std::string oct = std::to_string(octave);
  if (name.size() == 1) return std::string(name) + oct;
  // Sharp with flat alias, e.g. "D#4/Eb4" with the octave substituted.
  return std::string(name.substr(0, 2)) + oct + "/" +
         std::string(name.substr(4, 2)) + oct;
}

Utterance ParseTranscription(std::string_view line, const PhonemeDict& dict) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
    line.remove_suffix(1);
  }
  auto fields = SplitChar(line, '|');
  if (fields.size() != 7) {
    throw Error(ErrorCode::kMalformedLine,
                "expected 7 fields, got " + std::to_string(fields.size()));
  }
  Utterance utt;
  utt.id = Trim(fields[0]);
  if (utt.id.empty()) throw Error(ErrorCode::kMalformedLine, "empty id");
  utt.text = SplitUtf8(Trim(fields[1]));
  utt.phonemes = SplitWhitespace(fields[2]);
  auto notes = SplitWhitespace(fields[3]);
  auto note_durs = SplitWhitespace(fields[4]);
  auto ph_durs = SplitWhitespace(fields[5]);
  auto slurs = SplitWhitespace(fields[6]);

  const size_t n = utt.phonemes.size();
  if (notes.size() != n || note_durs.size() != n || ph_durs.size() != n ||
      slurs.size() != n) {
    std::ostringstream msg;
    msg << utt.id << ": phonemes=" << n << " notes=" << notes.size()
        << " note_durations=" << note_durs.size()
        << " phoneme_durations=" << ph_durs.size()
        << " slurs=" << slurs.size();
    throw Error(ErrorCode::kLengthMismatch, msg.str());
  }
  for (size_t i = 0; i < n; ++i) {
    const std::string& ph = utt.phonemes[i];
    if (!dict.IsKnownPhoneme(ph)) {
      throw Error(ErrorCode::kUnknownPhoneme, utt.id + ": '" + ph + "'");
    }
    utt.note_pitches.push_back(IsRestPhoneme(ph) ? kRestPitch
                                                 : NoteNameToMidi(notes[i]));
    utt.note_durations_sec.push_back(ParseDuration(note_durs[i], utt.id));
    utt.phoneme_durations_sec.push_back(ParseDuration(ph_durs[i], utt.id));
    if (slurs[i] != "0" && slurs[i] != "1") {
      throw Error(ErrorCode::kMalformedLine,
                  utt.id + ": bad slur flag '" + slurs[i] + "'");
    }
    utt.slur_flags.push_back(slurs[i] == "1" ? 1 : 0);
  }
  utt.Validate();
  return utt;
}

std::string SerializeTranscription(const Utterance& utt) {
  std::string text;
  for (const auto& c : utt.text) text += c;
  std::string out = utt.id + "|" + text + "|";
  out += Join(utt.phonemes, [](const std::string& s) { return s; });
  out += "|";
  out += Join(utt.note_pitches, [](int p) { return MidiToNoteName(p); });
  out += "|";
  out += Join(utt.note_durations_sec, FormatDouble);
  out += "|";
  out += Join(utt.phoneme_durations_sec, FormatDouble);
  out += "|";
  out += Join(utt.slur_flags, [](int s) { return std::to_string(s); });
  return out;
}

std::vector<TranscriptionEntry> LoadTranscriptions(const std::string& path,
                                                   const PhonemeDict& dict) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::vector<TranscriptionEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    TranscriptionEntry entry;
    entry.line_number = lineno;
    try {
      entry.utterance = ParseTranscription(line, dict);
    } catch (const Error& e) {
      entry.error = e;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace svs
