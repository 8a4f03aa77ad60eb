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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero when any fails. The overfit run dominates the runtime.

#include <torch/torch.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "svs/base/error.h"
#include "svs/base/hash.h"
#include "svs/corpus/fixture.h"
#include "svs/corpus/lexicon.h"
#include "svs/corpus/split.h"
#include "svs/corpus/transcription.h"
#include "svs/dsp/features.h"
#include "svs/eval/evaluate.h"
#include "svs/eval/synthesis.h"
#include "svs/score/score.h"
#include "svs/semantic/expansion.h"
#include "svs/semantic/provider.h"
#include "svs/training/checkpoint.h"
#include "svs/training/data.h"
#include "svs/training/trainer.h"
#include "training_util.h"

#ifndef SVS_CLI
#define SVS_CLI "svs"
#endif

namespace svs {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(const std::string& name, const std::function<Outcome()>& fn,
            double limit_sec = 0.0) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_sec > 0.0 && sec > limit_sec) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(limit_sec) + " s budget)";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %s  [%.2f s] %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), sec,
              o.detail.c_str());
  std::fflush(stdout);
}

std::string Fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

Outcome PitchFormula() {
  double worst = 0.0;
  for (int p = 0; p <= 127; ++p) {
    const double ref = 440.0 * std::pow(2.0, (p - 69) / 12.0);
    worst = std::max(worst, std::abs(PitchIdToFrequency(p) - ref) / ref);
  }
  const bool exact = PitchIdToFrequency(69) == 440.0 && PitchIdToFrequency(57) == 220.0;
  return {worst <= 1e-9 && exact, "max rel err " + Fmt(worst) + (exact ? "" : ", A4/A3 not exact")};
}

// Counts analysis windows by sliding one explicitly.
int64_t CountWindows(int64_t samples, int wl, int hl) {
  int64_t n = 0;
  for (int64_t start = 0; start + wl <= samples; start += hl) ++n;
  return std::max<int64_t>(n, 1);
}

Outcome FrameCount() {
  const int rates[] = {16000, 22050, 24000, 44100, 48000};
  const int windows[] = {512, 1024, 2048};
  SplitMix64 rng(2024);
  int bad = 0;
  for (int i = 0; i < 20; ++i) {
    const int sr = rates[rng.Below(5)];
    const int wl = windows[rng.Below(3)];
    const int hl = wl / static_cast<int>(1 + rng.Below(4));
    const int64_t samples = static_cast<int64_t>(rng.Below(5 * sr));
    const double dur = static_cast<double>(samples) / sr;
    if (FramesForDuration(dur, sr, wl, hl) != CountWindows(samples, wl, hl)) ++bad;
  }
  const int64_t exact = FramesForDuration(5120.0 / 24000.0, 24000, 1024, 256);
  return {bad == 0 && exact == 17,
          std::to_string(bad) + " of 20 tuples differ, 5120/1024/256 -> " + std::to_string(exact)};
}

Outcome Upsample(const std::string& corpus) {
  auto lexicon = PinyinLexicon::Load((fs::path(corpus) / "lexicon.txt").string());
  auto dict = PhonemeDict::Load((fs::path(corpus) / "opencpop-strict.txt").string());
  auto entries =
      LoadTranscriptions((fs::path(corpus) / "segments" / "transcriptions.txt").string(), dict);
  StubProvider provider(3);
  int64_t checked = 0, bad = 0;
  for (const auto& e : entries) {
    if (!e.utterance) continue;
    const auto& u = *e.utterance;
    ++checked;
    try {
      auto words = EmbedWords(u.text, provider);
      auto plan = BuildExpansionPlan(u.text, u.phonemes, lexicon, dict);
      auto out = ExpandEmbeddings(words, plan);
      bool ok = out.size(0) == static_cast<int64_t>(u.phonemes.size());
      const auto src = plan.SourceWords();
      for (size_t i = 0; ok && i < u.phonemes.size(); ++i) {
        const bool rest = IsRestPhoneme(u.phonemes[i]);
        const bool zero = out[i].abs().max().item<float>() == 0.0f;
        ok = rest ? zero : (!zero && src[i] >= 0 && torch::equal(out[i], words.vectors[src[i]]));
      }
      if (!ok) ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }

  PinyinLexicon lx;
  PhonemeDict dc;
  lx.Add("W1", {"shi"});
  lx.Add("W2", {"a"});
  dc.Add("shi", {"sh", "i"});
  dc.Add("a", {"a"});
  auto v = torch::randn({2, kSemanticDim});
  auto out = ExpandEmbeddings(v, BuildExpansionPlan({"W1", "W2"}, {"sh", "i", "i", "SP", "a"},
                                                     lx, dc));
  const bool worked = out.size(0) == 5 && torch::equal(out[0], v[0]) &&
                      torch::equal(out[1], v[0]) && torch::equal(out[2], v[0]) &&
                      torch::equal(out[3], torch::zeros({kSemanticDim})) &&
                      torch::equal(out[4], v[1]);
  return {checked > 0 && bad == 0 && worked,
          std::to_string(checked) + " utterances, " + std::to_string(bad) +
              " violations, worked example " + (worked ? "ok" : "wrong")};
}

Outcome Energy() {
  torch::manual_seed(9);
  // 1000 random complex frames, brute-force sum over bins.
  auto frames = torch::complex(torch::randn({513, 1000}, torch::kDouble),
                               torch::randn({513, 1000}, torch::kDouble));
  auto got = FrameEnergy(frames);
  auto re = torch::real(frames).contiguous(), im = torch::imag(frames).contiguous();
  auto ra = re.accessor<double, 2>(), ia = im.accessor<double, 2>();
  auto ga = got.accessor<double, 1>();
  double worst = 0.0;
  for (int64_t t = 0; t < 1000; ++t) {
    double acc = 0.0;
    for (int64_t k = 0; k < 513; ++k) acc += ra[k][t] * ra[k][t] + ia[k][t] * ia[k][t];
    const double ref = std::sqrt(acc);
    worst = std::max(worst, std::abs(ga[t] - ref) / ref);
  }
  // And through the STFT of a signal against a naive DFT on a few frames.
  StftConfig cfg;
  std::vector<float> x(cfg.window_length + 40 * cfg.hop_length);
  SplitMix64 rng(4);
  for (auto& s : x) s = static_cast<float>(rng.Uniform() - 0.5);
  auto e = FrameEnergy(Stft(WaveformTensor(Waveform{x, 24000}, torch::kDouble), cfg));
  for (int64_t t : {0, 7, 23, 40}) {
    auto mag = testing::NaiveDftMagnitude(x, t * cfg.hop_length, cfg.window_length);
    double acc = 0.0;
    for (double m : mag) acc += m * m;
    const double ref = std::sqrt(acc);
    worst = std::max(worst, std::abs(e[t].item<double>() - ref) / ref);
  }
  return {worst <= 1e-6, "max rel err " + Fmt(worst)};
}

Outcome RatioIdentity() {
  torch::manual_seed(1);
  auto c = testing::TinyConfig();
  c.dropout = 0.0;
  Synthesizer model(c, PitchQuantizer::Default(), testing::TinyEnergyQuantizer());
  auto prior = model->prior();
  prior->to(torch::kDouble);
  const int64_t t = 200;
  auto note = torch::rand({1, t}, torch::kDouble) * 2 + 4.5;
  note.slice(1, 150).zero_();
  auto voiced = note > 0;
  auto wav = note + torch::randn({1, t}, torch::kDouble) * 0.05;
  auto r = torch::where(voiced, wav / torch::where(voiced, note, torch::ones_like(note)),
                        torch::ones_like(note));
  auto back = prior->PitchFromRatio(r, note).lf0_hat;
  const double err =
      torch::where(voiced, (back - wav).abs(), torch::zeros_like(wav)).max().item<double>();
  const bool unit =
      torch::equal(prior->PitchFromRatio(torch::ones({1, t}, torch::kDouble), note).lf0_hat, note);
  return {err <= 1e-6 && unit,
          "reconstruction err " + Fmt(err) + (unit ? ", r=1 exact" : ", r=1 not exact")};
}

Outcome Gradients() {
  auto config = testing::TinyConfig(8);
  auto features = testing::TinyFeatures();
  config.sample_rate = features.sample_rate;
  torch::manual_seed(11);
  Synthesizer model(config, PitchQuantizer::Default(), testing::TinyEnergyQuantizer());
  model->to(torch::kDouble);
  {
    torch::NoGradGuard no_grad;
    for (auto& p : model->parameters()) {
      if (p.abs().max().item<double>() == 0.0) p.normal_(0.0, 0.1);
    }
  }
  auto batch = testing::TinyBatch(config, torch::kDouble);
  auto terms = [&] {
    torch::manual_seed(5);
    auto out = model->forward(batch.inputs, batch.targets, batch.linear, 4);
    auto y = TargetSegments(batch, out, features.stft);
    return ComputeGeneratorTerms(batch, out, y, features, nullptr, nullptr);
  };
  const std::vector<std::pair<std::string, torch::Tensor GeneratorTerms::*>> list = {
      {"pitch", &GeneratorTerms::pitch}, {"energy", &GeneratorTerms::energy},
      {"duration", &GeneratorTerms::duration}, {"kl", &GeneratorTerms::kl},
      {"mel", &GeneratorTerms::mel}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, member] : list) {
    auto loss = [&, member = member] { return terms().*member; };
    const double err = testing::GradientCheck(*model, loss, 6, 17);
    ok = ok && err < 1e-3;
    detail += name + " " + Fmt(err) + " ";
  }
  return {ok, detail};
}

double FlowRoundTrip(Synthesizer& model, uint64_t seed) {
  torch::manual_seed(seed);
  const int64_t latent = model->config().latent_dim;
  auto z = torch::randn({2, latent, 300});
  auto mask = (torch::arange(300).unsqueeze(0) < torch::tensor({300, 211}).unsqueeze(1))
                  .unsqueeze(1)
                  .to(torch::kFloat);
  return model->flow()->RoundTripError(z * mask, mask);
}

Outcome FlowAtInit(const RunConfig& config) {
  torch::manual_seed(3);
  Synthesizer model(config.model, config.pitch_quantizer, config.energy_quantizer);
  model->eval();
  const double err = FlowRoundTrip(model, 8);
  // The coupling outputs start at zero, which makes the flow the identity;
  // randomize them so the inverse is actually exercised.
  {
    torch::NoGradGuard no_grad;
    for (auto& p : model->flow()->parameters()) {
      if (p.abs().max().item<double>() == 0.0) p.normal_(0.0, 0.1);
    }
  }
  const double perturbed = FlowRoundTrip(model, 8);
  return {err <= 1e-4 && perturbed <= 1e-4,
          "max abs err " + Fmt(err) + ", " + Fmt(perturbed) + " with random coupling outputs"};
}

struct SmokeResult {
  std::vector<LossReport> log;
  std::vector<CheckpointRecord> checkpoints;
  std::string final_checkpoint;
};

double Mean(const std::vector<LossReport>& log, size_t from, size_t to) {
  double acc = 0.0;
  for (size_t i = from; i < to; ++i) acc += log[i].l_mel;
  return acc / static_cast<double>(to - from);
}

Outcome LossTrainer(const std::vector<LossReport>& log) {
  if (log.size() < 20) return {false, "too few steps"};
  const double start = Mean(log, 0, 10);
  const double end = Mean(log, log.size() - 10, log.size());
  const double drop = 1.0 - end / start;
  return {drop >= 0.6, "l_mel " + Fmt(start) + " -> " + Fmt(end) + " (" +
                           Fmt(100.0 * drop) + "% drop over " + std::to_string(log.size()) +
                           " steps)"};
}

Outcome Determinism(const std::string& data, const fs::path& root) {
  std::vector<std::string> logs;
  for (const char* run : {"det_a", "det_b"}) {
    const auto out = root / run;
    const std::string cmd = std::string(SVS_CLI) + " train --data-dir '" + data +
                            "' --out-dir '" + out.string() + "' --steps 50 --seed 77 > '" +
                            (root / (std::string(run) + ".log")).string() + "' 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "train command failed: " + cmd};
    std::ifstream in(out / "loss_log.jsonl");
    logs.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  const auto lines = std::count(logs[0].begin(), logs[0].end(), '\n');
  return {lines == 50 && logs[0] == logs[1],
          std::to_string(lines) + " log lines, logs " +
              (logs[0] == logs[1] ? "identical" : "differ")};
}

int Run() {
  torch::set_num_threads(1);
  testing::TempDir root("acceptance");
  std::printf("acceptance run in %s\n", root.path().c_str());

  Report("pitch formula", PitchFormula, 1.0);
  Report("frames for duration", FrameCount, 1.0);

  std::string corpus = testing::OpencpopDir();
  if (corpus.empty()) {
    corpus = (root.path() / "fixture50").string();
    WriteSyntheticCorpus(corpus, FixtureOptions{});
  }
  Report("upsample invariant", [&] { return Upsample(corpus); }, 60.0);
  Report("frame energy", Energy, 5.0);
  Report("pitch ratio identity", RatioIdentity);
  Report("loss gradients", Gradients, 60.0);

  // Eight training utterances, two held out.
  const auto small = (root.path() / "corpus8").string();
  FixtureOptions fo;
  fo.num_utterances = 10;
  WriteSyntheticCorpus(small, fo);
  PrepareOptions po;
  po.corpus_dir = small;
  po.out_dir = (root.path() / "data").string();
  po.n_eval = 2;
  RunConfig config;
  PrepareData(po, DeskConfig(), &config);

  Report("flow invertibility at init", [&] { return FlowAtInit(config); });

  SmokeResult smoke;
  const auto smoke_start = Clock::now();
  Report("overfit smoke: mel loss", [&] {
    Trainer trainer(config, po.out_dir, (root.path() / "smoke").string());
    smoke.log = trainer.Run();
    smoke.checkpoints = trainer.checkpoints();
    if (!smoke.checkpoints.empty()) smoke.final_checkpoint = smoke.checkpoints.back().path;
    double mono = 0.0;
    for (size_t i = 10; i < std::min<size_t>(200, smoke.log.size()); ++i) {
      if (Mean(smoke.log, i - 10, i) > Mean(smoke.log, i - 9, i + 1)) mono += 1.0;
    }
    auto o = LossTrainer(smoke.log);
    o.detail += ", moving average falls on " + Fmt(mono) + " of the first 190 steps";
    return o;
  });

  Report("overfit smoke: training-item metrics", [&] {
    if (smoke.final_checkpoint.empty()) return Outcome{false, "no checkpoint"};
    EvalOptions eo;
    eo.checkpoint = smoke.final_checkpoint;
    eo.data_dir = po.out_dir;
    eo.out_dir = (root.path() / "smoke_eval").string();
    eo.split = "train";
    auto r = Evaluate(eo);
    const bool ok = r.n_utterances == 8 && r.f0_mae && *r.f0_mae < 30.0 && r.dur_mae < 10.0;
    return Outcome{ok, std::to_string(r.n_utterances) + " items, F0 MAE " +
                           (r.f0_mae ? Fmt(*r.f0_mae) : std::string("NA")) + " Hz, Dur MAE " +
                           Fmt(r.dur_mae) + " frames, energy MAE " + Fmt(r.energy_mae)};
  });
  {
    const double sec = std::chrono::duration<double>(Clock::now() - smoke_start).count();
    Report("overfit smoke: runtime", [&] {
      return Outcome{sec <= 3600.0, Fmt(sec / 60.0) + " min for training and evaluation"};
    });
  }

  // The duration predictor has to generalize to an unseen score. Judged on
  // the first held-out utterance; the rest are listed for reference.
  Report("overfit smoke: held-out duration", [&] {
    if (smoke.final_checkpoint.empty()) return Outcome{false, "no checkpoint"};
    SynthesisEngine engine(smoke.final_checkpoint, po.out_dir);
    const auto split = LoadSplit((fs::path(po.out_dir) / "split.json").string());
    if (split.eval.empty()) return Outcome{false, "no held-out utterance"};
    bool ok = false;
    std::string detail;
    for (const auto& item : LoadTrainingItems(po.out_dir, config, split.eval)) {
      auto r = engine.Synthesize(item.utterance, item.input.word_vectors, 1);
      const double got = r.wave.DurationSec(), want = item.utterance.TotalPhonemeSeconds();
      if (item.input.id == split.eval.front()) ok = std::abs(got - want) <= 0.05 * want;
      detail += item.input.id + " " + Fmt(got) + " s vs " + Fmt(want) + " s (" +
                Fmt(100.0 * (got - want) / want) + "%) ";
    }
    return Outcome{ok, detail};
  });

  Report("flow invertibility after training", [&] {
    if (smoke.final_checkpoint.empty()) return Outcome{false, "no checkpoint"};
    double worst = 0.0;
    for (const auto& c : smoke.checkpoints) worst = std::max(worst, c.flow_round_trip);
    auto model = LoadSynthesizer(smoke.final_checkpoint);
    model->eval();
    worst = std::max(worst, FlowRoundTrip(model, 8));
    return Outcome{worst <= 1e-4, "max abs err " + Fmt(worst) + " over " +
                                      std::to_string(smoke.checkpoints.size()) +
                                      " checkpoints and random latents"};
  });

  Report("ablation harness parity", [&] {
    std::vector<MetricReport> reports;
    std::string detail;
    for (const auto& variant : VariantNames()) {
      RunConfig c = config;
      ApplyVariant(&c, variant);
      c.train.steps = 50;
      c.train.checkpoint_every = 0;
      const auto out = root.path() / ("ablation_" + variant);
      Trainer trainer(c, po.out_dir, out.string());
      trainer.Run();
      EvalOptions eo;
      eo.checkpoint = trainer.checkpoints().back().path;
      eo.data_dir = po.out_dir;
      eo.out_dir = (out / "eval").string();
      eo.variant = variant;
      eo.write_audio = false;
      reports.push_back(Evaluate(eo));
      const auto& r = reports.back();
      detail += variant + " (f0 " + (r.f0_mae ? Fmt(*r.f0_mae) : std::string("NA")) + ", dur " +
                Fmt(r.dur_mae) + ", energy " + Fmt(r.energy_mae) + ") ";
    }
    bool ok = reports.size() == 4;
    for (const auto& r : reports) {
      ok = ok && r.n_utterances > 0 && r.n_utterances == reports[0].n_utterances &&
           std::isfinite(r.dur_mae) && std::isfinite(r.energy_mae) &&
           (!r.f0_mae || std::isfinite(*r.f0_mae));
      for (size_t i = 0; ok && i < r.per_utterance.size(); ++i) {
        ok = r.per_utterance[i].id == reports[0].per_utterance[i].id;
      }
    }
    return Outcome{ok, detail};
  });

  Report("determinism", [&] { return Determinism(po.out_dir, root.path()); });

  std::printf("%d failing criteria\n", failures);
  return failures ? 1 : 0;
}

}  // namespace
}  // namespace svs

int main() {
  try {
    return svs::Run();
  } catch (const std::exception& e) {
    std::printf("FAIL  setup  %s\n", e.what());
    return 1;
  }
}
