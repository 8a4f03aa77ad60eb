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

#ifndef SVS_EVAL_METRICS_H_
#define SVS_EVAL_METRICS_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "svs/corpus/audio.h"
#include "svs/dsp/config.h"

namespace svs {

// Frame contours used by the metrics and the plots.
struct Contours {
  std::vector<double> energy;   // raw L2 frame energy
  std::vector<double> f0_hz;    // 0 where unvoiced
};

Contours ExtractContours(const Waveform& wave, const FeatureConfig& features);

// Mean |f0_ref - f0_syn| in Hz over frames voiced in both, after truncating
// to the shorter sequence. Throws EmptyOverlap when no frame qualifies.
double F0Mae(const std::vector<double>& ref_hz, const std::vector<double>& syn_hz);
// Mean absolute difference over the common prefix.
double EnergyMae(const std::vector<double>& ref, const std::vector<double>& syn);
// Mean |predicted - annotated| phoneme frames. Throws ShapeMismatch on
// differing phoneme counts.
double DurationMae(const std::vector<int64_t>& annotated, const std::vector<int64_t>& predicted);

struct UtteranceMetrics {
  std::string id;
  std::optional<double> f0_mae;  // absent when no frame is voiced in both
  double dur_mae = 0.0;
  double energy_mae = 0.0;
};

UtteranceMetrics CompareContours(const std::string& id, const Contours& ref, const Contours& syn,
                                 const std::vector<int64_t>& annotated_durations,
                                 const std::vector<int64_t>& predicted_durations);

// Both waveforms must be at features.sample_rate (ConfigInvalid otherwise).
UtteranceMetrics ComputeMetrics(const std::string& id, const Waveform& ref, const Waveform& syn,
                                const std::vector<int64_t>& annotated_durations,
                                const std::vector<int64_t>& predicted_durations,
                                const FeatureConfig& features);

struct MetricReport {
  std::string variant;
  int64_t n_utterances = 0;
  // Means of the per-utterance values; f0 over utterances where present.
  std::optional<double> f0_mae;
  double dur_mae = 0.0;
  double energy_mae = 0.0;
  std::vector<UtteranceMetrics> per_utterance;

  static MetricReport Aggregate(const std::string& variant,
                                std::vector<UtteranceMetrics> per_utterance);
};

void to_json(nlohmann::json& j, const UtteranceMetrics& m);
void from_json(const nlohmann::json& j, UtteranceMetrics& m);
void to_json(nlohmann::json& j, const MetricReport& r);
void from_json(const nlohmann::json& j, MetricReport& r);

// Writes <stem>.json (full report) and <stem>.tsv (one row per utterance
// plus an "ALL" row). Throws WriteFailure.
void WriteMetricReport(const std::string& stem, const MetricReport& report);

}  // namespace svs

#endif  // SVS_EVAL_METRICS_H_
