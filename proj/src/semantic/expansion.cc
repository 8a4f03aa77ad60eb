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

#include "svs/semantic/expansion.h"

#include <numeric>
#include <set>
#include <tuple>

#include "svs/base/error.h"
#include "svs/corpus/utterance.h"

namespace svs {

int64_t ExpansionPlan::num_phonemes() const {
  return std::accumulate(n2.begin(), n2.end(), int64_t{0}) +
         static_cast<int64_t>(rest_indices.size());
}

void ExpansionPlan::Validate() const {
  const int64_t m = std::accumulate(n1.begin(), n1.end(), int64_t{0});
  if (m != static_cast<int64_t>(n2.size())) {
    throw Error(ErrorCode::kPlanMismatch,
                "sum(n1)=" + std::to_string(m) + " but |n2|=" +
                    std::to_string(n2.size()));
  }
  for (int64_t c : n1) {
    if (c < 1) throw Error(ErrorCode::kPlanMismatch, "word with no phonemes");
  }
  for (int64_t r : n2) {
    if (r < 1) throw Error(ErrorCode::kPlanMismatch, "repetition count < 1");
  }
  const int64_t total = num_phonemes();
  int64_t prev = -1;
  for (int64_t r : rest_indices) {
    if (r <= prev || r >= total) {
      throw Error(ErrorCode::kPlanMismatch, "bad rest index " + std::to_string(r));
    }
    prev = r;
  }
}

std::vector<int64_t> ExpansionPlan::SourceWords() const {
  Validate();
  std::vector<int64_t> source(num_phonemes(), -1);
  std::vector<bool> rest(source.size(), false);
  for (int64_t r : rest_indices) rest[r] = true;
  size_t pos = 0, k = 0;
  for (size_t w = 0; w < n1.size(); ++w) {
    for (int64_t j = 0; j < n1[w]; ++j, ++k) {
      for (int64_t rep = 0; rep < n2[k]; ++rep) {
        while (rest[pos]) ++pos;
        source[pos++] = static_cast<int64_t>(w);
      }
    }
  }
  return source;
}

namespace {

class Aligner {
 public:
  Aligner(const std::vector<std::string>& text,
          const std::vector<std::string>& phonemes, const PinyinLexicon& lexicon,
          const PhonemeDict& dict)
      : text_(text), ph_(phonemes), lexicon_(lexicon), dict_(dict) {}

  bool Run(ExpansionPlan* plan) {
    plan_ = plan;
    return MatchWord(0, 0);
  }

 private:
  size_t SkipRests(size_t pos) const {
    while (pos < ph_.size() && IsRestPhoneme(ph_[pos])) ++pos;
    return pos;
  }

  bool MatchWord(size_t w, size_t pos) {
    pos = SkipRests(pos);
    if (w == text_.size()) return pos == ph_.size();
    if (failed_words_.count({w, pos})) return false;
    const auto* readings = lexicon_.Find(text_[w]);
    if (readings == nullptr) {
      throw Error(ErrorCode::kAlignmentFailure,
                  "character \"" + text_[w] + "\" not in lexicon");
    }
    for (const auto& reading : *readings) {
      const auto* seq = dict_.Find(reading);
      if (seq == nullptr || seq->empty()) continue;
      plan_->n1.push_back(static_cast<int64_t>(seq->size()));
      plan_->readings.push_back(reading);
      if (MatchPhoneme(w, *seq, 0, pos)) return true;
      plan_->n1.pop_back();
      plan_->readings.pop_back();
    }
    failed_words_.insert({w, pos});
    return false;
  }

  bool MatchPhoneme(size_t w, const std::vector<std::string>& seq, size_t j,
                    size_t pos) {
    if (j == seq.size()) return MatchWord(w + 1, pos);
    // Rests may sit between the phonemes of a word (e.g. a breath in a
    // melisma); they are recorded separately.
    pos = SkipRests(pos);
    if (pos >= ph_.size() || ph_[pos] != seq[j]) return false;
    size_t run = 1;
    while (pos + run < ph_.size() && ph_[pos + run] == seq[j]) ++run;
    for (size_t r = run; r >= 1; --r) {
      plan_->n2.push_back(static_cast<int64_t>(r));
      if (MatchPhoneme(w, seq, j + 1, pos + r)) return true;
      plan_->n2.pop_back();
    }
    return false;
  }

  const std::vector<std::string>& text_;
  const std::vector<std::string>& ph_;
  const PinyinLexicon& lexicon_;
  const PhonemeDict& dict_;
  ExpansionPlan* plan_ = nullptr;
  std::set<std::pair<size_t, size_t>> failed_words_;
};

}  // namespace

ExpansionPlan BuildExpansionPlan(const std::vector<std::string>& text,
                                 const std::vector<std::string>& phonemes,
                                 const PinyinLexicon& lexicon,
                                 const PhonemeDict& dict) {
  ExpansionPlan plan;
  if (!Aligner(text, phonemes, lexicon, dict).Run(&plan)) {
    std::string joined;
    for (const auto& p : phonemes) joined += p + " ";
    throw Error(ErrorCode::kAlignmentFailure,
                "cannot align phonemes [" + joined + "] to lexicon readings");
  }
  for (size_t i = 0; i < phonemes.size(); ++i) {
    if (IsRestPhoneme(phonemes[i])) {
      plan.rest_indices.push_back(static_cast<int64_t>(i));
    }
  }
  plan.Validate();
  return plan;
}

torch::Tensor ExpandEmbeddings(const torch::Tensor& words,
                               const ExpansionPlan& plan) {
  if (words.dim() != 2 || words.size(0) != static_cast<int64_t>(plan.n1.size())) {
    throw Error(ErrorCode::kPlanMismatch,
                "plan covers " + std::to_string(plan.n1.size()) + " words, got " +
                    std::to_string(words.dim() == 2 ? words.size(0) : -1));
  }
  const auto source = plan.SourceWords();
  auto index = torch::tensor(source, torch::kLong);
  auto padded = torch::cat({words, torch::zeros({1, words.size(1)}, words.options())});
  index = torch::where(index < 0, torch::full_like(index, words.size(0)), index);
  return padded.index_select(0, index);
}

torch::Tensor ExpandEmbeddings(const WordEmbeddingSeq& words,
                               const ExpansionPlan& plan) {
  return ExpandEmbeddings(words.vectors, plan);
}

}  // namespace svs
