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

#include "svs/corpus/lexicon.h"

#include <fstream>

#include "svs/base/error.h"
#include "svs/base/utf8.h"
#include "svs/corpus/utterance.h"

namespace svs {

namespace {

// "<key>\t<v> <v>..." lines; blank lines and '#' comments are skipped.
std::map<std::string, std::vector<std::string>> ReadTable(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::map<std::string, std::vector<std::string>> table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t tab = t.find('\t');
    if (tab == std::string::npos) tab = t.find(' ');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kMalformedLine,
                  path + ":" + std::to_string(lineno) + ": missing value");
    }
    std::string key = Trim(std::string_view(t).substr(0, tab));
    auto values = SplitWhitespace(std::string_view(t).substr(tab + 1));
    if (key.empty() || values.empty()) {
      throw Error(ErrorCode::kMalformedLine,
                  path + ":" + std::to_string(lineno) + ": empty entry");
    }
    table[key] = std::move(values);
  }
  return table;
}

void WriteTable(const std::string& path,
                const std::map<std::string, std::vector<std::string>>& table) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kWriteFailure, "cannot write " + path);
  for (const auto& [key, values] : table) {
    out << key << '\t';
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) out << ' ';
      out << values[i];
    }
    out << '\n';
  }
}

}  // namespace

PhonemeDict PhonemeDict::Load(const std::string& path) {
  PhonemeDict dict;
  for (auto& [k, v] : ReadTable(path)) dict.Add(k, std::move(v));
  return dict;
}

PhonemeDict PhonemeDict::FromEntries(
    const std::map<std::string, std::vector<std::string>>& entries) {
  PhonemeDict dict;
  for (const auto& [k, v] : entries) dict.Add(k, v);
  return dict;
}

void PhonemeDict::Add(const std::string& pinyin,
                      std::vector<std::string> phonemes) {
  for (const auto& ph : phonemes) inventory_.insert(ph);
  entries_[pinyin] = std::move(phonemes);
}

const std::vector<std::string>* PhonemeDict::Find(
    const std::string& pinyin) const {
  auto it = entries_.find(pinyin);
  return it == entries_.end() ? nullptr : &it->second;
}

bool PhonemeDict::IsKnownPhoneme(const std::string& phoneme) const {
  return IsRestPhoneme(phoneme) || inventory_.count(phoneme) > 0;
}

std::vector<std::string> PhonemeDict::Inventory() const {
  return {inventory_.begin(), inventory_.end()};
}

void PhonemeDict::Save(const std::string& path) const {
  WriteTable(path, entries_);
}

PinyinLexicon PinyinLexicon::Load(const std::string& path) {
  PinyinLexicon lex;
  for (auto& [k, v] : ReadTable(path)) lex.Add(k, std::move(v));
  return lex;
}

void PinyinLexicon::Add(const std::string& character,
                        std::vector<std::string> readings) {
  entries_[character] = std::move(readings);
}

const std::vector<std::string>* PinyinLexicon::Find(
    const std::string& character) const {
  auto it = entries_.find(character);
  return it == entries_.end() ? nullptr : &it->second;
}

void PinyinLexicon::Save(const std::string& path) const {
  WriteTable(path, entries_);
}

}  // namespace svs
