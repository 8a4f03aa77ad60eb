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

#include <filesystem>
#include <fstream>

#include "model_util.h"
#include "test_util.h"
#include "training_util.h"
#include "svs/base/error.h"
#include "svs/corpus/fixture.h"
#include "svs/corpus/split.h"
#include "svs/training/checkpoint.h"
#include "svs/training/data.h"
#include "svs/training/losses.h"
#include "svs/training/run_config.h"
#include "svs/training/trainer.h"

namespace svs {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;
using testing::TinyBatch;
using testing::TinyConfig;
using testing::TinyEnergyQuantizer;
using testing::TinyFeatures;
using testing::Fixture;
using testing::SmallRun;

double Scalar(const torch::Tensor& t) { return t.item<double>(); }

TEST_CASE("pitch loss") {
  auto a = torch::tensor({1.0, 2.0});
  auto on = torch::tensor({true, true});
  CHECK(Scalar(PitchLoss(a, a, on)) == 0.0);
  CHECK(Scalar(PitchLoss(a, a + 3.0, torch::tensor({false, false}))) == 0.0);
  // Residual (3, 4) over two voiced frames: 5 / 2.
  CHECK(Scalar(PitchLoss(torch::tensor({3.0, 4.0}), torch::zeros({2}), on)) ==
        doctest::Approx(2.5));
  // A masked frame contributes nothing.
  CHECK(Scalar(PitchLoss(torch::tensor({3.0, 4.0, 100.0}), torch::zeros({3}),
                         torch::tensor({true, true, false}))) == doctest::Approx(2.5));
  CHECK_THROWS_AS(PitchLoss(a, torch::zeros({3}), on), Error);
}

TEST_CASE("energy loss") {
  auto e = torch::randn({37}, torch::kDouble);
  CHECK(Scalar(EnergyLoss(e, e)) == 0.0);
  for (double delta : {0.5, -1.75, 3.0}) {
    CHECK(Scalar(EnergyLoss(e, e + delta)) == doctest::Approx(std::abs(delta)).epsilon(1e-12));
  }
  CHECK(Scalar(EnergyLoss(torch::tensor({1.0}), torch::tensor({3.0}))) == doctest::Approx(2.0));
  CHECK_THROWS_AS(EnergyLoss(e, torch::zeros({3}, torch::kDouble)), Error);
}

TEST_CASE("duration, kl, mel and adversarial losses") {
  auto r = torch::tensor({{1.0, 2.0, 9.0}});
  auto m = torch::tensor({{true, true, false}});
  CHECK(Scalar(DurationLoss(r + 1.0, r, m)[0]) == doctest::Approx(1.0));

  // z_p one prior deviation away with matched scales: each element
  // contributes -1/2 + 1/2 = 0.
  auto mp = torch::randn({2, 3, 5}, torch::kDouble);
  auto lp = 0.3 * torch::randn({2, 3, 5}, torch::kDouble);
  auto mask = torch::ones({2, 1, 5}, torch::kDouble);
  auto kl = KlLoss(mp + torch::exp(lp), lp, mp, lp, torch::zeros({2}, torch::kDouble), mask);
  CHECK(kl.abs().max().item<double>() < 1e-12);
  // log-determinant enters with a minus sign, per frame.
  auto kl2 = KlLoss(mp + torch::exp(lp), lp, mp, lp, torch::full({2}, 5.0, torch::kDouble), mask);
  CHECK(kl2[0].item<double>() == doctest::Approx(-1.0));

  auto mel = torch::randn({2, 4, 6});
  CHECK(MelLoss(mel, mel).abs().max().item<double>() == 0.0);
  CHECK(MelLoss(mel + 0.5, mel)[1].item<double>() == doctest::Approx(0.5));

  std::vector<torch::Tensor> half = {torch::full({2, 7}, 0.5), torch::full({2, 3}, 0.5)};
  CHECK(Scalar(GeneratorAdversarialLoss(half)) == doctest::Approx(0.5));
  CHECK(Scalar(DiscriminatorLoss(half, half)) == doctest::Approx(1.0));
  std::vector<std::vector<torch::Tensor>> fm = {{torch::ones({2, 3})}, {torch::ones({2, 2, 2})}};
  CHECK(Scalar(FeatureMatchingLoss(fm, fm)) == 0.0);
}

TEST_CASE("padded frames contribute no loss") {
  // Item of length 5 alone vs padded to 9 with garbage in a batch of two.
  auto opts = torch::TensorOptions().dtype(torch::kDouble);
  auto a = torch::randn({5}, opts), b = torch::randn({5}, opts);
  auto voiced = torch::tensor({true, false, true, true, true});
  auto pad = [&](const torch::Tensor& x) {
    return torch::cat({x, 100.0 * torch::randn({4}, opts)}).unsqueeze(0);
  };
  auto two = [&](const torch::Tensor& x) { return torch::cat({torch::randn({1, 9}, opts), x}); };
  auto mask1 = torch::cat({voiced, torch::zeros({4}, torch::kBool)}).unsqueeze(0);
  auto mask2 = torch::cat({torch::ones({1, 9}, torch::kBool), mask1});
  auto fmask1 = torch::cat({torch::ones({5}, torch::kBool), torch::zeros({4}, torch::kBool)})
                    .unsqueeze(0);
  auto fmask2 = torch::cat({torch::ones({1, 9}, torch::kBool), fmask1});

  CHECK(std::abs(Scalar(PitchLoss(a, b, voiced)) -
                 PitchLoss(two(pad(a)), two(pad(b)), mask2)[1].item<double>()) < 1e-5);
  CHECK(std::abs(Scalar(EnergyLoss(a, b)) -
                 EnergyLoss(two(pad(a)), two(pad(b)), fmask2)[1].item<double>()) < 1e-5);
  CHECK(std::abs(Scalar(DurationLoss(a, b, torch::ones({5}, torch::kBool))) -
                 DurationLoss(two(pad(a)), two(pad(b)), fmask2)[1].item<double>()) < 1e-5);

  auto z = torch::randn({1, 3, 5}, opts), m = torch::randn({1, 3, 5}, opts);
  auto lq = 0.2 * torch::randn({1, 3, 5}, opts), lp = 0.2 * torch::randn({1, 3, 5}, opts);
  auto ld = torch::tensor({0.7}, opts);
  auto padz = [&](const torch::Tensor& x) {
    return torch::cat({torch::randn({1, 3, 9}, opts),
                       torch::cat({x, 50.0 * torch::randn({1, 3, 4}, opts)}, 2)});
  };
  auto kmask = torch::cat({torch::ones({1, 1, 9}, opts), fmask1.unsqueeze(1).to(torch::kDouble)});
  auto single = KlLoss(z, lq, m, lp, ld, torch::ones({1, 1, 5}, opts));
  auto batched = KlLoss(padz(z), padz(lq), padz(m), padz(lp), torch::cat({ld, ld}), kmask);
  CHECK(std::abs(single[0].item<double>() - batched[1].item<double>()) < 1e-5);
}

TEST_CASE("model losses of a padded utterance match the unpadded ones") {
  torch::manual_seed(3);
  auto c = TinyConfig();
  Synthesizer model(c, PitchQuantizer::Default(), TinyEnergyQuantizer());
  model->eval();
  auto batch = TinyBatch(c, torch::kFloat, 7, 4);
  // Item 1 on its own.
  Batch one;
  const int64_t n = 4;
  const int64_t t = batch.frame_lengths[1].item<int64_t>();
  auto take = [](const torch::Tensor& x, int64_t len) {
    return x.slice(0, 1, 2).slice(1, 0, len).clone();
  };
  one.inputs.score.phoneme_ids = take(batch.inputs.score.phoneme_ids, n);
  one.inputs.score.note_pitch_ids = take(batch.inputs.score.note_pitch_ids, n);
  one.inputs.score.note_frames = take(batch.inputs.score.note_frames, n);
  one.inputs.score.slur_ids = take(batch.inputs.score.slur_ids, n);
  one.inputs.score.note_lf0 = take(batch.inputs.score.note_lf0, n);
  one.inputs.score.phoneme_mask = take(batch.inputs.score.phoneme_mask, n);
  one.inputs.word_vectors = batch.inputs.word_vectors.slice(0, 1, 2);
  one.inputs.word_mask = batch.inputs.word_mask.slice(0, 1, 2);
  one.inputs.source_index = take(batch.inputs.source_index, n);
  one.targets.durations = take(batch.targets.durations, n);
  one.targets.lf0 = take(batch.targets.lf0, t);
  one.targets.log_energy = take(batch.targets.log_energy, t);
  one.targets.teacher_forcing = true;
  one.voicing = take(batch.voicing, t);
  one.duration_ratio = take(batch.duration_ratio, n);
  one.linear = batch.linear.slice(0, 1, 2).slice(2, 0, t);
  one.frame_lengths = batch.frame_lengths.slice(0, 1, 2);
  one.audio = batch.audio.slice(0, 1, 2);

  torch::NoGradGuard no_grad;
  auto l2 = ComputeUtteranceLosses(batch, model->forward(batch.inputs, batch.targets,
                                                         batch.linear, 4));
  auto l1 = ComputeUtteranceLosses(one, model->forward(one.inputs, one.targets, one.linear, 4));
  CHECK(std::abs(l1.pitch[0].item<double>() - l2.pitch[1].item<double>()) < 1e-5);
  CHECK(std::abs(l1.energy[0].item<double>() - l2.energy[1].item<double>()) < 1e-5);
  CHECK(std::abs(l1.duration[0].item<double>() - l2.duration[1].item<double>()) < 1e-5);
}

struct GradSetup {
  ModelConfig config = TinyConfig();
  FeatureConfig features = TinyFeatures();
  Synthesizer model{nullptr};
  MultiDiscriminator disc{nullptr};
  Batch batch;

  explicit GradSetup(int64_t harmonics = 0) {
    config.decoder_harmonics = harmonics;
    config.sample_rate = features.sample_rate;
    torch::manual_seed(11);
    model = Synthesizer(config, PitchQuantizer::Default(), TinyEnergyQuantizer());
    disc = MultiDiscriminator(config);
    model->to(torch::kDouble);
    disc->to(torch::kDouble);
    // Move the zero-initialized output layers off zero so every path carries
    // gradient.
    torch::NoGradGuard no_grad;
    for (auto& p : model->parameters()) {
      if (p.abs().max().item<double>() == 0.0) p.normal_(0.0, 0.1);
    }
    batch = TinyBatch(config, torch::kDouble);
  }

  GeneratorTerms Terms(bool adversarial) {
    torch::manual_seed(5);
    auto out = model->forward(batch.inputs, batch.targets, batch.linear, 4);
    auto y = TargetSegments(batch, out, features.stft);
    if (!adversarial) return ComputeGeneratorTerms(batch, out, y, features, nullptr, nullptr);
    auto real = disc->forward(y);
    auto fake = disc->forward(out.y_hat);
    return ComputeGeneratorTerms(batch, out, y, features, &real, &fake);
  }
};

TEST_CASE("loss gradients match central differences") {
  GradSetup s;
  const std::vector<std::pair<const char*, torch::Tensor GeneratorTerms::*>> terms = {
      {"pitch", &GeneratorTerms::pitch}, {"energy", &GeneratorTerms::energy},
      {"duration", &GeneratorTerms::duration}, {"kl", &GeneratorTerms::kl},
      {"mel", &GeneratorTerms::mel}};
  for (const auto& [name, member] : terms) {
    auto loss = [&, member = member] { return s.Terms(false).*member; };
    const double err = testing::GradientCheck(*s.model, loss, 4, 17);
    INFO(name);
    CHECK(err < 1e-3);
  }
  auto total = [&] { return s.Terms(true).Total(LossWeights{}); };
  CHECK(testing::GradientCheck(*s.model, total, 5, 23) < 1e-2);

  // With the harmonic source in the decoder.
  GradSetup h(2);
  auto mel = [&] { return h.Terms(false).mel; };
  CHECK(testing::GradientCheck(*h.model, mel, 4, 29) < 1e-3);
}

TEST_CASE("total at equilibrium is the adversarial constant") {
  const auto c = TinyConfig();
  const int64_t k = c.num_sub_discriminators();
  GeneratorTerms t;
  auto x = torch::randn({2, 8});
  t.pitch = PitchLoss(x, x, torch::ones({2, 8}, torch::kBool)).mean();
  t.energy = EnergyLoss(x, x).mean();
  t.duration = DurationLoss(x, x, torch::ones({2, 8}, torch::kBool)).mean();
  auto mp = torch::randn({2, 3, 8}), lp = torch::randn({2, 3, 8}) * 0.1;
  t.kl = KlLoss(mp + torch::exp(lp), lp, mp, lp, torch::zeros({2}), torch::ones({2, 1, 8})).mean();
  auto mel = torch::randn({2, 4, 8});
  t.mel = MelLoss(mel, mel).mean();
  std::vector<torch::Tensor> scores;
  std::vector<std::vector<torch::Tensor>> fmaps;
  for (int64_t i = 0; i < k; ++i) {
    scores.push_back(torch::full({2, 5}, 0.5));
    fmaps.push_back({torch::randn({2, 4, 5})});
  }
  t.adv = GeneratorAdversarialLoss(scores);
  t.fm = FeatureMatchingLoss(fmaps, fmaps);
  LossWeights w;
  CHECK(t.Total(w).item<double>() == doctest::Approx(w.adv * 0.25 * k).epsilon(1e-6));
  auto report = MakeReport(t, w, DiscriminatorLoss(scores, scores), 0);
  CHECK(report.total_d == doctest::Approx(0.5 * k));
  CHECK(report.AllFinite());

  // Doubling the pitch weight adds the pitch term once more.
  t.pitch = torch::tensor(0.75);
  LossWeights w2 = w;
  w2.pitch *= 2.0;
  CHECK(Scalar(t.Total(w2) - t.Total(w)) == doctest::Approx(0.75));

  t.mel = torch::tensor(NAN);
  CHECK_THROWS_AS(MakeReport(t, w, torch::tensor(0.0), 3), Error);
}

TEST_CASE("learning rate schedule") {
  OptimizerSchedule s;
  CHECK(s.LearningRate(0) == 1e-4);
  CHECK(s.LearningRate(2) == 1e-4 * 0.999875 * 0.999875);
  CHECK(s.LearningRate(2, 999) == s.LearningRate(2));
  s.decay_per_epoch = false;
  CHECK(s.LearningRate(2, 7) == doctest::Approx(1e-4 * std::pow(0.999875, 7)));
  OptimizerSchedule bad;
  bad.decay = 1.5;
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("bucketing groups similar lengths") {
  auto b = BucketBatches({50, 10, 40, 20, 30}, 2);
  REQUIRE(b.size() == 3);
  CHECK(b[0] == std::vector<size_t>{1, 3});
  CHECK(b[1] == std::vector<size_t>{4, 2});
  CHECK(b[2] == std::vector<size_t>{0});
}

TEST_CASE("prepare-data writes a consistent cache") {
  auto& p = Fixture();
  const fs::path d(p.data);
  for (const char* f : {"manifest.jsonl", "split.json", "config.json", "lexicon.txt",
                        "opencpop-strict.txt"}) {
    CHECK(fs::exists(d / f));
  }
  auto split = LoadSplit((d / "split.json").string());
  CHECK(split.train.size() == 8);
  CHECK(split.eval.size() == 2);
  auto loaded = RunConfig::Load((d / "config.json").string());
  CHECK(loaded.Hash() == p.config.Hash());
  CHECK(p.config.energy_quantizer.hi > p.config.energy_quantizer.lo);
  CHECK(p.config.model.vocab_size == static_cast<int64_t>(p.config.vocabulary.size()));

  auto items = LoadTrainingItems(p.data, p.config, {split.train[0]});
  const auto& it = items[0];
  CHECK(it.linear.size(1) == it.frames());
  CHECK(it.lf0.size(0) == it.frames());
  int64_t total = 0;
  for (auto v : it.durations) total += v;
  CHECK(total == it.frames());
  CHECK(static_cast<int64_t>(it.input.source_index.size()) ==
        static_cast<int64_t>(it.utterance.size()));

  RunConfig other = p.config;
  other.features.stft.hop_length = 128;
  CHECK_THROWS_AS(LoadTrainingItems(p.data, other, {split.train[0]}), Error);
}

TEST_CASE("trainer is deterministic and follows the schedule") {
  auto& p = Fixture();
  auto c = SmallRun(p.config);
  c.optimizer.lr0 = 1e-4;
  c.train.steps = 5;
  TempDir out1("run1"), out2("run2");
  Trainer t1(c, p.data, out1.str());
  CHECK(t1.steps_per_epoch() == 2);
  auto r1 = t1.Run();
  Trainer t2(c, p.data, out2.str());
  auto r2 = t2.Run();
  REQUIRE(r1.size() == 5);
  CHECK((r1 == r2));
  for (const auto& r : r1) CHECK(r.AllFinite());
  CHECK(r1[0].lr == 1e-4);
  CHECK(r1[4].lr == 1e-4 * 0.999875 * 0.999875);  // step 4 opens epoch 2

  auto read = [](const fs::path& f) {
    std::ifstream in(f);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(read(out1.path() / "loss_log.jsonl") == read(out2.path() / "loss_log.jsonl"));
  REQUIRE(t1.checkpoints().size() == 1);
  CHECK(t1.checkpoints()[0].flow_round_trip <= 1e-4);
  CHECK(fs::exists(out1.path() / "checkpoint.pt"));
}

TEST_CASE("checkpoints round trip and refuse other configs") {
  auto& p = Fixture();
  auto c = SmallRun(p.config);
  TempDir dir("ckpt");
  torch::manual_seed(1);
  Synthesizer a(c.model, c.pitch_quantizer, c.energy_quantizer);
  MultiDiscriminator da(c.model);
  const auto path = (dir.path() / "sub" / "x.pt").string();
  SaveCheckpoint(path, a, &da, c, 42);
  CHECK_FALSE(fs::exists(path + ".tmp"));

  torch::manual_seed(2);
  Synthesizer b(c.model, c.pitch_quantizer, c.energy_quantizer);
  MultiDiscriminator db(c.model);
  auto info = LoadCheckpoint(path, c, b, &db);
  CHECK(info.step == 42);
  CHECK(info.config_hash == c.Hash());
  auto pa = a->named_parameters(), pb = b->named_parameters();
  for (const auto& kv : pa) CHECK(torch::equal(kv.value(), pb[kv.key()]));
  auto qa = da->named_parameters(), qb = db->named_parameters();
  for (const auto& kv : qa) CHECK(torch::equal(kv.value(), qb[kv.key()]));

  auto loaded = LoadSynthesizer(path);
  CHECK(loaded->ParameterCount() == a->ParameterCount());

  RunConfig other = c;
  other.energy_quantizer.hi += 1.0;
  try {
    LoadCheckpoint(path, other, b);
    FAIL("expected a hash mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigHashMismatch);
  }
  // Training-only settings do not change the hash.
  RunConfig longer = c;
  longer.train.steps = 99999;
  CHECK(longer.Hash() == c.Hash());

  // A path under a regular file cannot be created.
  std::ofstream(dir.path() / "file") << "x";
  try {
    SaveCheckpoint((dir.path() / "file" / "y.pt").string(), a, nullptr, c, 0);
    FAIL("expected a write failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCheckpointWriteFailure);
  }
}

TEST_CASE("run config json round trip and variants") {
  auto c = DeskConfig();
  c.vocabulary = {"<pad>", "SP", "a"};
  c.model.vocab_size = 3;
  auto back = nlohmann::json::parse(nlohmann::json(c).dump()).get<RunConfig>();
  CHECK(nlohmann::json(back) == nlohmann::json(c));
  CHECK(back.Hash() == c.Hash());
  for (const auto& v : VariantNames()) {
    auto x = c;
    ApplyVariant(&x, v);
    CHECK(x.Hash() != (v == "proposed" ? std::string() : c.Hash()));
  }
  CHECK_THROWS_AS(ApplyVariant(&c, "bogus"), Error);
}

}  // namespace
}  // namespace svs
