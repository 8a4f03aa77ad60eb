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

#ifndef SVS_CORPUS_LEXICON_H_
#define SVS_CORPUS_LEXICON_H_

#include <map>
#include <set>
#include <string>
#include <vector>

namespace svs {

// pinyin syllable -> phonemes, as shipped with Opencpop
// (`opencpop-strict.txt`: "<pinyin>\t<ph> <ph>...").
class PhonemeDict {
 public:
  PhonemeDict() = default;

  static PhonemeDict Load(const std::string& path);
  static PhonemeDict FromEntries(
      const std::map<std::string, std::vector<std::string>>& entries);

  void Add(const std::string& pinyin, std::vector<std::string> phonemes);

  const std::vector<std::string>* Find(const std::string& pinyin) const;

  // True for any phoneme produced by some entry, and for SP/AP.
  bool IsKnownPhoneme(const std::string& phoneme) const;

  // Sorted phoneme inventory without SP/AP.
  std::vector<std::string> Inventory() const;

  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

  void Save(const std::string& path) const;

 private:
  std::map<std::string, std::vector<std::string>> entries_;
  std::set<std::string> inventory_;
};

// Lyric character -> candidate pinyin readings (first is the default).
// File format: "<char>\t<pinyin>[ <pinyin>...]".
class PinyinLexicon {
 public:
  PinyinLexicon() = default;

  static PinyinLexicon Load(const std::string& path);

  void Add(const std::string& character, std::vector<std::string> readings);
  const std::vector<std::string>* Find(const std::string& character) const;

  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

  void Save(const std::string& path) const;

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

}  // namespace svs

#endif  // SVS_CORPUS_LEXICON_H_
