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

#include <fstream>
#include <functional>

#include "svs/base/error.h"
#include "svs/corpus/fixture.h"
#include "svs/corpus/transcription.h"
#include "svs/semantic/expansion.h"
#include "svs/semantic/provider.h"
#include "svs/semantic/text_encoder.h"
#include "test_util.h"

namespace svs {
namespace {

struct ToyLexicon {
  PinyinLexicon lexicon;
  PhonemeDict dict;
  ToyLexicon() {
    lexicon.Add("W1", {"shi"});
    lexicon.Add("W2", {"a"});
    lexicon.Add("P", {"zhang", "chang"});
    dict.Add("shi", {"sh", "i"});
    dict.Add("a", {"a"});
    dict.Add("zhang", {"zh", "ang"});
    dict.Add("chang", {"ch", "ang"});
  }
};

void CheckCode(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    FAIL("no error raised");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

TEST_CASE("expansion plan of the two-word example") {
  ToyLexicon t;
  auto plan = BuildExpansionPlan({"W1", "W2"}, {"sh", "i", "i", "SP", "a"},
                                 t.lexicon, t.dict);
  CHECK(plan.n1 == std::vector<int64_t>{2, 1});
  CHECK(plan.n2 == std::vector<int64_t>{1, 2, 1});
  CHECK(plan.rest_indices == std::vector<int64_t>{3});
  CHECK(plan.num_phonemes() == 5);

  auto v = torch::randn({2, 768});
  auto out = ExpandEmbeddings(v, plan);
  REQUIRE(out.sizes() == torch::IntArrayRef({5, 768}));
  CHECK(torch::equal(out[0], v[0]));
  CHECK(torch::equal(out[1], v[0]));
  CHECK(torch::equal(out[2], v[0]));
  CHECK(torch::equal(out[3], torch::zeros({768})));
  CHECK(torch::equal(out[4], v[1]));
}

TEST_CASE("plain phonemes expand one to one") {
  ToyLexicon t;
  auto plan = BuildExpansionPlan({"W1", "W2"}, {"sh", "i", "a"}, t.lexicon, t.dict);
  CHECK(plan.n2 == std::vector<int64_t>{1, 1, 1});
  CHECK(plan.rest_indices.empty());
  auto single = BuildExpansionPlan({"W2"}, {"a"}, t.lexicon, t.dict);
  auto v = torch::randn({1, 768});
  CHECK(torch::equal(ExpandEmbeddings(v, single), v));
}

TEST_CASE("inconsistent phonemes fail alignment") {
  ToyLexicon t;
  CheckCode(ErrorCode::kAlignmentFailure, [&] {
    BuildExpansionPlan({"W1"}, {"x"}, t.lexicon, t.dict);
  });
  CheckCode(ErrorCode::kAlignmentFailure, [&] {
    BuildExpansionPlan({"W1"}, {"sh", "i", "a"}, t.lexicon, t.dict);
  });
  CheckCode(ErrorCode::kAlignmentFailure, [&] {
    BuildExpansionPlan({"??"}, {"a"}, t.lexicon, t.dict);
  });
}

TEST_CASE("polyphonic reading chosen by the phonemes") {
  ToyLexicon t;
  auto first = BuildExpansionPlan({"P"}, {"zh", "ang"}, t.lexicon, t.dict);
  CHECK(first.readings == std::vector<std::string>{"zhang"});
  auto second = BuildExpansionPlan({"P"}, {"ch", "ang", "ang"}, t.lexicon, t.dict);
  CHECK(second.readings == std::vector<std::string>{"chang"});
  CHECK(second.n2 == std::vector<int64_t>{1, 2});
}

TEST_CASE("greedy repetition backs off when the next word needs the phoneme") {
  PinyinLexicon lex;
  PhonemeDict dict;
  lex.Add("A", {"a"});
  dict.Add("a", {"a"});
  // "a a a" for two words "A A": the first run cannot take all three.
  auto plan = BuildExpansionPlan({"A", "A"}, {"a", "a", "a"}, lex, dict);
  CHECK(plan.n2 == std::vector<int64_t>{2, 1});
}

TEST_CASE("all-rest utterance expands to zeros") {
  ToyLexicon t;
  auto plan = BuildExpansionPlan({}, {"SP", "AP"}, t.lexicon, t.dict);
  CHECK(plan.rest_indices == std::vector<int64_t>{0, 1});
  auto out = ExpandEmbeddings(torch::zeros({0, 768}), plan);
  CHECK(out.sizes() == torch::IntArrayRef({2, 768}));
  CHECK(out.abs().sum().item<double>() == 0.0);
}

TEST_CASE("plan mismatch is typed") {
  ToyLexicon t;
  auto plan = BuildExpansionPlan({"W1", "W2"}, {"sh", "i", "a"}, t.lexicon, t.dict);
  CheckCode(ErrorCode::kPlanMismatch,
            [&] { ExpandEmbeddings(torch::randn({3, 768}), plan); });
  plan.n2.pop_back();
  CheckCode(ErrorCode::kPlanMismatch, [&] { plan.Validate(); });
}

TEST_CASE("fixture corpus: length, zero placement and replication") {
  testing::TempDir dir("semantic_fixture");
  FixtureOptions opts;
  opts.num_utterances = 50;
  WriteSyntheticCorpus(dir.str(), opts);
  auto dict = PhonemeDict::Load(dir.str() + "/opencpop-strict.txt");
  auto lexicon = PinyinLexicon::Load(dir.str() + "/lexicon.txt");
  StubProvider provider(3);
  int checked = 0;
  for (const auto& entry : LoadTranscriptions(
           dir.str() + "/segments/transcriptions.txt", dict)) {
    REQUIRE(entry.utterance.has_value());
    const auto& utt = *entry.utterance;
    auto plan = BuildExpansionPlan(utt.text, utt.phonemes, lexicon, dict);
    auto words = EmbedWords(utt.text, provider);
    auto out = ExpandEmbeddings(words, plan);
    REQUIRE(out.size(0) == static_cast<int64_t>(utt.phonemes.size()));
    const auto source = plan.SourceWords();
    for (int64_t i = 0; i < out.size(0); ++i) {
      const bool rest = IsRestPhoneme(utt.phonemes[i]);
      CHECK((source[i] < 0) == rest);
      const bool zero = out[i].abs().sum().item<double>() == 0.0;
      CHECK(zero == rest);
      if (!rest) CHECK(torch::equal(out[i], words.vectors[source[i]]));
    }
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("stub provider is deterministic and contextual") {
  StubProvider provider(1);
  auto a = EmbedWords({"我", "爱", "你"}, provider);
  auto b = EmbedWords({"我", "爱", "你"}, provider);
  CHECK(a.vectors.sizes() == torch::IntArrayRef({3, 768}));
  CHECK(torch::equal(a.vectors, b.vectors));
  auto c = EmbedWords({"你", "爱", "我"}, provider);
  CHECK(!torch::equal(a.vectors[1], c.vectors[1]));
  CHECK(!torch::equal(a.vectors, StubProvider(2).Embed({"我", "爱", "你"})));
}

TEST_CASE("token vectors are mean-pooled per character") {
  auto tokens = torch::tensor({{1.0f, 1.0f}, {2.0f, 4.0f}, {4.0f, 8.0f},
                               {5.0f, 5.0f}, {9.0f, 9.0f}});
  // [CLS] c0 c0 c1 [SEP]
  auto pooled = MeanPoolTokens(tokens, {-1, 0, 0, 1, -1}, 2);
  CHECK(torch::equal(pooled, torch::tensor({{3.0f, 6.0f}, {5.0f, 5.0f}})));
  CheckCode(ErrorCode::kTokenizationMismatch,
            [&] { MeanPoolTokens(tokens, {-1, 0, 0, 0, -1}, 2); });
  CheckCode(ErrorCode::kTokenizationMismatch,
            [&] { MeanPoolTokens(tokens, {-1, 0, 3, 1, -1}, 2); });
}

TEST_CASE("precomputed provider reads exported embeddings") {
  testing::TempDir dir("semantic_pre");
  const std::string path = dir.str() + "/emb.jsonl";
  {
    std::ofstream out(path);
    nlohmann::json j;
    j["text"] = "我爱";
    j["token_to_char"] = {-1, 0, 1, 1, -1};
    std::vector<std::vector<float>> rows(5, std::vector<float>(768, 0.0f));
    rows[1][0] = 2.0f;
    rows[2][0] = 1.0f;
    rows[3][0] = 3.0f;
    j["vectors"] = rows;
    out << j.dump() << "\n";
  }
  ProviderConfig cfg;
  cfg.kind = "precomputed";
  cfg.path = path;
  auto provider = MakeProvider(cfg);
  auto seq = EmbedWords({"我", "爱"}, *provider);
  CHECK(seq.vectors.sizes() == torch::IntArrayRef({2, 768}));
  CHECK(seq.vectors[0][0].item<float>() == 2.0f);
  CHECK(seq.vectors[1][0].item<float>() == 2.0f);
  CheckCode(ErrorCode::kProviderUnavailable,
            [&] { EmbedWords({"你"}, *provider); });
  cfg.path = dir.str() + "/missing.jsonl";
  CheckCode(ErrorCode::kProviderUnavailable, [&] { MakeProvider(cfg); });
}

SemanticEncoderConfig SmallEncoder() {
  SemanticEncoderConfig cfg;
  cfg.n_fft_blocks = 2;
  cfg.model_dim = 64;
  cfg.filter_dim = 128;
  return cfg;
}

TEST_CASE("encoder keeps length and outputs 192 dims") {
  torch::manual_seed(0);
  SemanticEncoderConfig cfg;  // full width
  SemanticEncoder enc(cfg);
  enc->eval();
  auto x = torch::randn({1, 7, 768});
  auto y = enc->forward(x, torch::ones({1, 7}, torch::kBool));
  CHECK(y.sizes() == torch::IntArrayRef({1, 7, 192}));
  CheckCode(ErrorCode::kShapeMismatch, [&] {
    enc->forward(torch::zeros({1, 0, 768}), torch::ones({1, 0}, torch::kBool));
  });
  CheckCode(ErrorCode::kShapeMismatch, [&] {
    enc->forward(torch::zeros({1, 3, 512}), torch::ones({1, 3}, torch::kBool));
  });
}

TEST_CASE("encoder is permutation sensitive") {
  torch::manual_seed(1);
  SemanticEncoder enc(SmallEncoder());
  enc->eval();
  auto x = torch::randn({1, 6, 768});
  auto mask = torch::ones({1, 6}, torch::kBool);
  auto y = enc->forward(x, mask);
  auto perm = torch::tensor({1, 0, 2, 3, 4, 5}, torch::kLong);
  auto yp = enc->forward(x.index_select(1, perm), mask).index_select(1, perm);
  CHECK((y - yp).abs().max().item<double>() > 1e-4);
}

TEST_CASE("encoder output ignores padding") {
  torch::manual_seed(2);
  SemanticEncoder enc(SmallEncoder());
  enc->eval();
  auto x = torch::randn({1, 5, 768});
  auto y = enc->forward(x, torch::ones({1, 5}, torch::kBool));
  auto padded = torch::cat({x, torch::randn({1, 3, 768})}, 1);
  auto mask = torch::cat({torch::ones({1, 5}, torch::kBool),
                          torch::zeros({1, 3}, torch::kBool)}, 1);
  auto yp = enc->forward(padded, mask);
  CHECK((yp.slice(1, 0, 5) - y).abs().max().item<double>() < 1e-5);
  CHECK(yp.slice(1, 5).abs().max().item<double>() == 0.0);
}

TEST_CASE("standard and reversed variants differ but share length") {
  torch::manual_seed(3);
  ToyLexicon t;
  auto plan = BuildExpansionPlan({"W1", "W2"}, {"sh", "i", "i", "SP", "a"},
                                 t.lexicon, t.dict);
  auto words = EmbedWords({"W1", "W2"}, StubProvider(0));
  auto src = torch::tensor(plan.SourceWords(), torch::kLong).unsqueeze(0);
  auto wmask = torch::ones({1, 2}, torch::kBool);
  auto pmask = torch::ones({1, 5}, torch::kBool);
  SemanticEncoder enc(SmallEncoder());
  enc->eval();
  auto wv = words.vectors.unsqueeze(0);
  auto std_out = EncodeSemantics(enc, SemanticVariant::kStandard, 192, wv, wmask, src, pmask);
  auto rev_out = EncodeSemantics(enc, SemanticVariant::kReversed, 192, wv, wmask, src, pmask);
  auto off_out = EncodeSemantics(enc, SemanticVariant::kOff, 192, wv, wmask, src, pmask);
  CHECK(std_out.sizes() == torch::IntArrayRef({1, 5, 192}));
  CHECK(rev_out.sizes() == std_out.sizes());
  CHECK(off_out.sizes() == std_out.sizes());
  CHECK(!torch::allclose(std_out, rev_out));
  CHECK(off_out.abs().sum().item<double>() == 0.0);
  // Reversed: replicated positions are identical, rests are zero.
  CHECK(torch::equal(rev_out[0][0], rev_out[0][2]));
  CHECK(rev_out[0][3].abs().sum().item<double>() == 0.0);
}

TEST_CASE("variant names round-trip") {
  for (auto v : {SemanticVariant::kStandard, SemanticVariant::kReversed,
                 SemanticVariant::kOff}) {
    CHECK(ParseSemanticVariant(SemanticVariantName(v)) == v);
  }
  CHECK_THROWS_AS(ParseSemanticVariant("sideways"), Error);
  SemanticEncoderConfig cfg;
  cfg.variant = SemanticVariant::kReversed;
  nlohmann::json j = cfg;
  CHECK(j.get<SemanticEncoderConfig>().variant == SemanticVariant::kReversed);
}

}  // namespace
}  // namespace svs
