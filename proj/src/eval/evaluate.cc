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

#include "svs/eval/evaluate.h"

#include <filesystem>

#include "svs/base/error.h"
#include "svs/base/log.h"
#include "svs/corpus/split.h"
#include "svs/dsp/features.h"
#include "svs/eval/plot.h"
#include "svs/eval/synthesis.h"
#include "svs/training/data.h"

namespace svs {

namespace fs = std::filesystem;

std::string VariantOf(const RunConfig& config) {
  const auto sem = config.model.semantic.variant;
  if (!config.model.use_energy) return sem == SemanticVariant::kStandard ? "no-energy" : "custom";
  switch (sem) {
    case SemanticVariant::kOff:
      return "no-sem";
    case SemanticVariant::kReversed:
      return "reversed-sem";
    default:
      return "proposed";
  }
}

MetricReport Evaluate(const EvalOptions& options) {
  const fs::path data(options.data_dir);
  const fs::path out(options.out_dir);
  auto trained = ReadCheckpointInfo(options.checkpoint);
  RunConfig runtime = RunConfig::Load(
      options.config.empty() ? (data / "config.json").string() : options.config);
  ApplyVariant(&runtime, options.variant.empty() ? VariantOf(trained.config) : options.variant);
  SynthesisEngine engine(options.checkpoint, options.data_dir, &runtime);

  auto split = LoadSplit((data / "split.json").string());
  std::vector<std::string> ids;
  if (options.split == "eval" || options.split == "all") ids = split.eval;
  if (options.split == "train" || options.split == "all") {
    ids.insert(ids.end(), split.train.begin(), split.train.end());
  }
  if (options.split != "eval" && options.split != "train" && options.split != "all") {
    throw Error(ErrorCode::kConfigInvalid, "unknown split " + options.split);
  }
  if (options.max_utterances > 0 && static_cast<int64_t>(ids.size()) > options.max_utterances) {
    ids.resize(options.max_utterances);
  }
  if (ids.empty()) throw Error(ErrorCode::kInsufficientData, "no utterances to evaluate");
  auto items = LoadTrainingItems(options.data_dir, runtime, ids);

  try {
    fs::create_directories(out);
    if (options.write_audio) fs::create_directories(out / "wavs");
    if (options.plots) fs::create_directories(out / "plots");
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kWriteFailure, options.out_dir + ": " + e.what());
  }

  const auto& features = runtime.features;
  std::vector<UtteranceMetrics> per_utt;
  for (const auto& item : items) {
    auto syn = engine.Synthesize(item.utterance, item.input.word_vectors, options.seed);
    Waveform ref;
    ref.sample_rate = features.sample_rate;
    auto audio = item.audio.to(torch::kFloat).contiguous();
    ref.samples.assign(audio.data_ptr<float>(), audio.data_ptr<float>() + audio.numel());

    auto ref_feats = ComputeFrameFeatures(ref, features);
    auto syn_feats = ComputeFrameFeatures(syn.wave, features);
    auto contours = [](const FrameFeatures& f) {
      Contours c;
      auto e = f.energy.to(torch::kDouble).contiguous();
      auto lf0 = f.lf0.to(torch::kDouble).contiguous();
      c.energy.assign(e.data_ptr<double>(), e.data_ptr<double>() + e.numel());
      for (int64_t t = 0; t < lf0.numel(); ++t) {
        c.f0_hz.push_back(f.voicing[t].item<float>() > 0.5f ? std::exp(lf0[t].item<double>())
                                                           : 0.0);
      }
      return c;
    };
    PanelData ref_panel{ref_feats.linear_spec, contours(ref_feats)};
    PanelData syn_panel{syn_feats.linear_spec, contours(syn_feats)};
    per_utt.push_back(CompareContours(item.utterance.id, ref_panel.contours, syn_panel.contours,
                                      item.durations, syn.durations));
    if (options.write_audio) WriteWav((out / "wavs" / (item.utterance.id + ".wav")).string(), syn.wave);
    if (options.plots) {
      PlotReport(ref_panel, syn_panel, (out / "plots" / (item.utterance.id + ".png")).string());
    }
    const auto& m = per_utt.back();
    SVS_LOG(INFO) << m.id << " f0 " << (m.f0_mae ? std::to_string(*m.f0_mae) : "NA") << " dur "
                  << m.dur_mae << " energy " << m.energy_mae;
  }
  auto report = MetricReport::Aggregate(VariantOf(runtime), std::move(per_utt));
  WriteMetricReport((out / "metrics").string(), report);
  return report;
}

}  // namespace svs
