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

#include "svs/eval/metrics.h"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "svs/base/error.h"
#include "svs/dsp/features.h"

namespace svs {

Contours ExtractContours(const Waveform& wave, const FeatureConfig& features) {
  auto f = ComputeFrameFeatures(wave, features);
  auto energy = f.energy.to(torch::kDouble).contiguous();
  auto lf0 = f.lf0.to(torch::kDouble).contiguous();
  auto voicing = f.voicing.contiguous();
  Contours c;
  const int64_t t = energy.numel();
  c.energy.assign(energy.data_ptr<double>(), energy.data_ptr<double>() + t);
  c.f0_hz.resize(t);
  for (int64_t i = 0; i < t; ++i) {
    c.f0_hz[i] = voicing.data_ptr<float>()[i] > 0.5f ? std::exp(lf0.data_ptr<double>()[i]) : 0.0;
  }
  return c;
}

double F0Mae(const std::vector<double>& ref_hz, const std::vector<double>& syn_hz) {
  const size_t n = std::min(ref_hz.size(), syn_hz.size());
  double sum = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < n; ++i) {
    if (ref_hz[i] > 0.0 && syn_hz[i] > 0.0) {
      sum += std::abs(ref_hz[i] - syn_hz[i]);
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::kEmptyOverlap, "no frame is voiced in both");
  return sum / static_cast<double>(count);
}

double EnergyMae(const std::vector<double>& ref, const std::vector<double>& syn) {
  const size_t n = std::min(ref.size(), syn.size());
  if (n == 0) throw Error(ErrorCode::kShapeMismatch, "empty energy contour");
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) sum += std::abs(ref[i] - syn[i]);
  return sum / static_cast<double>(n);
}

double DurationMae(const std::vector<int64_t>& annotated,
                   const std::vector<int64_t>& predicted) {
  if (annotated.size() != predicted.size() || annotated.empty()) {
    throw Error(ErrorCode::kShapeMismatch,
                "duration counts " + std::to_string(annotated.size()) + " vs " +
                    std::to_string(predicted.size()));
  }
  double sum = 0.0;
  for (size_t i = 0; i < annotated.size(); ++i) {
    sum += std::abs(static_cast<double>(annotated[i] - predicted[i]));
  }
  return sum / static_cast<double>(annotated.size());
}

UtteranceMetrics CompareContours(const std::string& id, const Contours& ref, const Contours& syn,
                                 const std::vector<int64_t>& annotated_durations,
                                 const std::vector<int64_t>& predicted_durations) {
  UtteranceMetrics m;
  m.id = id;
  try {
    m.f0_mae = F0Mae(ref.f0_hz, syn.f0_hz);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyOverlap) throw;
  }
  m.dur_mae = DurationMae(annotated_durations, predicted_durations);
  m.energy_mae = EnergyMae(ref.energy, syn.energy);
  return m;
}

UtteranceMetrics ComputeMetrics(const std::string& id, const Waveform& ref, const Waveform& syn,
                                const std::vector<int64_t>& annotated_durations,
                                const std::vector<int64_t>& predicted_durations,
                                const FeatureConfig& features) {
  if (ref.sample_rate != features.sample_rate || syn.sample_rate != features.sample_rate) {
    throw Error(ErrorCode::kConfigInvalid, "metrics expect audio at " +
                                               std::to_string(features.sample_rate) + " Hz");
  }
  return CompareContours(id, ExtractContours(ref, features), ExtractContours(syn, features),
                         annotated_durations, predicted_durations);
}

MetricReport MetricReport::Aggregate(const std::string& variant,
                                     std::vector<UtteranceMetrics> per_utterance) {
  MetricReport r;
  r.variant = variant;
  r.n_utterances = static_cast<int64_t>(per_utterance.size());
  double f0 = 0.0;
  int64_t n_f0 = 0;
  for (const auto& m : per_utterance) {
    if (m.f0_mae) {
      f0 += *m.f0_mae;
      ++n_f0;
    }
    r.dur_mae += m.dur_mae;
    r.energy_mae += m.energy_mae;
  }
  if (r.n_utterances > 0) {
    r.dur_mae /= static_cast<double>(r.n_utterances);
    r.energy_mae /= static_cast<double>(r.n_utterances);
  }
  if (n_f0 > 0) r.f0_mae = f0 / static_cast<double>(n_f0);
  r.per_utterance = std::move(per_utterance);
  return r;
}

void to_json(nlohmann::json& j, const UtteranceMetrics& m) {
  j = {{"id", m.id}, {"dur_mae", m.dur_mae}, {"energy_mae", m.energy_mae}};
  j["f0_mae"] = m.f0_mae ? nlohmann::json(*m.f0_mae) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, UtteranceMetrics& m) {
  m.id = j.at("id").get<std::string>();
  m.dur_mae = j.at("dur_mae").get<double>();
  m.energy_mae = j.at("energy_mae").get<double>();
  if (j.at("f0_mae").is_null()) {
    m.f0_mae.reset();
  } else {
    m.f0_mae = j.at("f0_mae").get<double>();
  }
}

void to_json(nlohmann::json& j, const MetricReport& r) {
  j = {{"variant", r.variant},
       {"n_utterances", r.n_utterances},
       {"dur_mae", r.dur_mae},
       {"energy_mae", r.energy_mae},
       {"per_utterance", r.per_utterance}};
  j["f0_mae"] = r.f0_mae ? nlohmann::json(*r.f0_mae) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, MetricReport& r) {
  r.variant = j.at("variant").get<std::string>();
  r.n_utterances = j.at("n_utterances").get<int64_t>();
  r.dur_mae = j.at("dur_mae").get<double>();
  r.energy_mae = j.at("energy_mae").get<double>();
  r.per_utterance = j.at("per_utterance").get<std::vector<UtteranceMetrics>>();
  if (j.at("f0_mae").is_null()) {
    r.f0_mae.reset();
  } else {
    r.f0_mae = j.at("f0_mae").get<double>();
  }
}

namespace {

std::string Cell(const std::optional<double>& v) {
  if (!v) return "NA";
  std::ostringstream s;
  s << std::setprecision(6) << *v;
  return s.str();
}

}  // namespace

void WriteMetricReport(const std::string& stem, const MetricReport& report) {
  std::ofstream json(stem + ".json");
  json << nlohmann::json(report).dump(2) << "\n";
  std::ofstream tsv(stem + ".tsv");
  tsv << "variant\tid\tf0_mae_hz\tdur_mae_frames\tenergy_mae\n";
  for (const auto& m : report.per_utterance) {
    tsv << report.variant << "\t" << m.id << "\t" << Cell(m.f0_mae) << "\t" << Cell(m.dur_mae)
        << "\t" << Cell(m.energy_mae) << "\n";
  }
  tsv << report.variant << "\tALL\t" << Cell(report.f0_mae) << "\t" << Cell(report.dur_mae)
      << "\t" << Cell(report.energy_mae) << "\n";
  if (!json || !tsv) throw Error(ErrorCode::kWriteFailure, "cannot write " + stem);
}

}  // namespace svs
