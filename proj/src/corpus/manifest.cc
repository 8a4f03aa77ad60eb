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

#include "svs/corpus/manifest.h"

#include <fstream>

#include "json.hpp"
#include "svs/base/error.h"
#include "svs/base/utf8.h"

namespace svs {

void WriteManifest(const std::string& path,
                   const std::vector<ManifestRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kWriteFailure, "cannot write " + path);
  for (const auto& r : records) {
    const Utterance& u = r.utterance;
    std::string text;
    for (const auto& c : u.text) text += c;
    nlohmann::json j = {{"id", u.id},
                        {"text", text},
                        {"phonemes", u.phonemes},
                        {"note_pitches", u.note_pitches},
                        {"note_durations", u.note_durations_sec},
                        {"phoneme_durations", u.phoneme_durations_sec},
                        {"slurs", u.slur_flags},
                        {"audio", u.audio_path},
                        {"sample_rate", r.sample_rate},
                        {"num_samples", r.num_samples}};
    out << j.dump() << '\n';
  }
}

std::vector<ManifestRecord> ReadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::vector<ManifestRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ManifestRecord r;
      Utterance& u = r.utterance;
      u.id = j.at("id").get<std::string>();
      u.text = SplitUtf8(j.at("text").get<std::string>());
      u.phonemes = j.at("phonemes").get<std::vector<std::string>>();
      u.note_pitches = j.at("note_pitches").get<std::vector<int>>();
      u.note_durations_sec = j.at("note_durations").get<std::vector<double>>();
      u.phoneme_durations_sec =
          j.at("phoneme_durations").get<std::vector<double>>();
      u.slur_flags = j.at("slurs").get<std::vector<int>>();
      u.audio_path = j.at("audio").get<std::string>();
      r.sample_rate = j.at("sample_rate").get<int>();
      r.num_samples = j.at("num_samples").get<int64_t>();
      u.Validate();
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedLine,
                  path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace svs
