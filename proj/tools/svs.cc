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

// Command-line front end: fixture generation, data preparation, training,
// synthesis, evaluation and plotting.

#include <torch/torch.h>

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "svs/base/error.h"
#include "svs/base/log.h"
#include "svs/corpus/audio.h"
#include "svs/corpus/fixture.h"
#include "svs/corpus/manifest.h"
#include "svs/corpus/transcription.h"
#include "svs/dsp/features.h"
#include "svs/eval/evaluate.h"
#include "svs/eval/plot.h"
#include "svs/eval/synthesis.h"
#include "svs/training/data.h"
#include "svs/training/run_config.h"
#include "svs/training/trainer.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

int ExitCodeFor(svs::ErrorCode code) {
  switch (code) {
    case svs::ErrorCode::kConfigInvalid:
    case svs::ErrorCode::kConfigHashMismatch:
    case svs::ErrorCode::kProviderUnavailable:
      return kExitConfig;
    default:
      return kExitData;
  }
}

svs::RunConfig LoadOrDefault(const std::string& path) {
  return path.empty() ? svs::DeskConfig() : svs::RunConfig::Load(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expressive singing voice synthesis toolkit"};
  app.require_subcommand(1);

  // make-fixture
  auto* fixture = app.add_subcommand("make-fixture", "write a synthetic Opencpop-layout corpus");
  std::string fixture_dir;
  svs::FixtureOptions fixture_opts;
  fixture->add_option("--out-dir", fixture_dir)->required();
  fixture->add_option("--utterances", fixture_opts.num_utterances);
  fixture->add_option("--seed", fixture_opts.seed);

  // default-config
  auto* defaults = app.add_subcommand("default-config", "write the desk-scale run config");
  std::string defaults_out;
  defaults->add_option("--out", defaults_out)->required();

  // prepare-data
  auto* prepare = app.add_subcommand("prepare-data", "featurize a corpus into a data directory");
  svs::PrepareOptions prep;
  std::string prep_config;
  prepare->add_option("--corpus-dir", prep.corpus_dir)->required();
  prepare->add_option("--out-dir", prep.out_dir)->required();
  prepare->add_option("--config", prep_config, "base run config (default: desk config)");
  prepare->add_option("--seed", prep.seed);
  prepare->add_option("--n-eval", prep.n_eval);
  prepare->add_option("--max-utterances", prep.max_utterances);

  // train
  auto* train = app.add_subcommand("train", "train a model on a prepared data directory");
  std::string train_config, train_data, train_out, train_variant;
  int64_t train_steps = -1;
  int64_t train_seed = -1;
  train->add_option("--config", train_config, "run config (default: <data-dir>/config.json)");
  train->add_option("--data-dir", train_data)->required();
  train->add_option("--out-dir", train_out)->required();
  train->add_option("--steps", train_steps);
  train->add_option("--seed", train_seed);
  train->add_option("--variant", train_variant, "proposed|no-energy|no-sem|reversed-sem");

  // synth
  auto* synth = app.add_subcommand("synth", "synthesize utterances from a checkpoint");
  std::string synth_ckpt, synth_lexicon, synth_trans, synth_out;
  std::vector<std::string> synth_ids;
  uint64_t synth_seed = 1;
  synth->add_option("--checkpoint", synth_ckpt)->required();
  synth->add_option("--data-dir", synth_lexicon, "directory with lexicon files and manifest")
      ->required();
  synth->add_option("--transcriptions", synth_trans, "score lines to synthesize");
  synth->add_option("--id", synth_ids, "manifest ids to synthesize");
  synth->add_option("--out-dir", synth_out)->required();
  synth->add_option("--seed", synth_seed);

  // eval
  auto* eval = app.add_subcommand("eval", "synthesize a split and compute the error metrics");
  svs::EvalOptions eval_opts;
  eval->add_option("--checkpoint", eval_opts.checkpoint)->required();
  eval->add_option("--data-dir", eval_opts.data_dir)->required();
  eval->add_option("--out-dir", eval_opts.out_dir)->required();
  eval->add_option("--config", eval_opts.config);
  eval->add_option("--split", eval_opts.split)->check(CLI::IsMember({"eval", "train", "all"}));
  eval->add_option("--variant", eval_opts.variant);
  eval->add_option("--seed", eval_opts.seed);
  eval->add_option("--max-utterances", eval_opts.max_utterances);
  eval->add_flag("--plots", eval_opts.plots);

  // plot
  auto* plot = app.add_subcommand("plot", "spectrogram, energy and pitch report for two wavs");
  std::string plot_ref, plot_syn, plot_out, plot_config;
  plot->add_option("--ref", plot_ref)->required();
  plot->add_option("--syn", plot_syn)->required();
  plot->add_option("--out", plot_out)->required();
  plot->add_option("--config", plot_config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*fixture) {
      svs::WriteSyntheticCorpus(fixture_dir, fixture_opts);
      std::cout << "wrote " << fixture_opts.num_utterances << " utterances to " << fixture_dir
                << "\n";
    } else if (*defaults) {
      svs::DeskConfig().Save(defaults_out);
    } else if (*prepare) {
      svs::RunConfig written;
      auto summary = svs::PrepareData(prep, LoadOrDefault(prep_config), &written);
      std::cout << summary.n_utterances << " utterances (" << summary.n_train << " train, "
                << summary.n_eval << " eval), " << summary.skipped.size() << " skipped\n";
    } else if (*train) {
      if (train_config.empty()) train_config = (fs::path(train_data) / "config.json").string();
      auto config = svs::RunConfig::Load(train_config);
      if (!train_variant.empty()) svs::ApplyVariant(&config, train_variant);
      if (train_steps >= 0) config.train.steps = train_steps;
      if (train_seed >= 0) config.train.seed = static_cast<uint64_t>(train_seed);
      svs::Trainer trainer(config, train_data, train_out);
      auto reports = trainer.Run();
      if (!reports.empty()) {
        std::cout << "step " << reports.back().step + 1 << " l_mel " << reports.back().l_mel
                  << "\n";
      }
    } else if (*synth) {
      svs::SynthesisEngine engine(synth_ckpt, synth_lexicon);
      std::vector<svs::Utterance> utts;
      if (!synth_trans.empty()) {
        svs::PhonemeDict dict =
            svs::PhonemeDict::Load((fs::path(synth_lexicon) / "opencpop-strict.txt").string());
        for (auto& e : svs::LoadTranscriptions(synth_trans, dict)) {
          if (e.error) throw *e.error;
          utts.push_back(*e.utterance);
        }
      }
      if (!synth_ids.empty()) {
        auto records = svs::ReadManifest((fs::path(synth_lexicon) / "manifest.jsonl").string());
        for (const auto& id : synth_ids) {
          auto it = std::find_if(records.begin(), records.end(),
                                 [&](const auto& r) { return r.utterance.id == id; });
          if (it == records.end()) {
            throw svs::Error(svs::ErrorCode::kIoError, "id " + id + " not in manifest");
          }
          utts.push_back(it->utterance);
        }
      }
      if (utts.empty()) throw svs::Error(svs::ErrorCode::kConfigInvalid, "nothing to synthesize");
      fs::create_directories(synth_out);
      for (const auto& u : utts) {
        auto r = engine.Synthesize(u, synth_seed);
        const auto path = (fs::path(synth_out) / (u.id + ".wav")).string();
        svs::WriteWav(path, r.wave);
        std::cout << path << " " << r.wave.DurationSec() << " s\n";
      }
    } else if (*eval) {
      auto report = svs::Evaluate(eval_opts);
      std::cout << report.variant << ": f0_mae "
                << (report.f0_mae ? std::to_string(*report.f0_mae) : std::string("NA"))
                << " Hz, dur_mae " << report.dur_mae << " frames, energy_mae "
                << report.energy_mae << " over " << report.n_utterances << " utterances\n";
    } else if (*plot) {
      auto config = LoadOrDefault(plot_config);
      auto panel = [&](const std::string& path) {
        auto wave = svs::IngestAudio(path, config.features.sample_rate);
        auto feats = svs::ComputeFrameFeatures(wave, config.features);
        return svs::PanelData{feats.linear_spec, svs::ExtractContours(wave, config.features)};
      };
      svs::PlotReport(panel(plot_ref), panel(plot_syn), plot_out);
    }
  } catch (const svs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
  return 0;
}
