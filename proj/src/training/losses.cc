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

#include "svs/training/losses.h"

#include <cmath>

#include "svs/base/error.h"

namespace svs {

namespace {

void RequireSameShape(const torch::Tensor& a, const torch::Tensor& b, const char* what) {
  if (a.sizes() != b.sizes()) {
    throw Error(ErrorCode::kShapeMismatch, std::string(what) + ": " + c10::str(a.sizes()) +
                                               " vs " + c10::str(b.sizes()));
  }
}

// Flattens everything after the batch axis.
torch::Tensor Rows(const torch::Tensor& x) { return x.reshape({x.size(0), -1}); }

torch::Tensor Norm(const torch::Tensor& rows) {
  return torch::linalg_vector_norm(rows, 2, {1}, false, c10::nullopt);
}

}  // namespace

torch::Tensor PitchLoss(const torch::Tensor& lf0_wav, const torch::Tensor& lf0_hat,
                        const torch::Tensor& mask) {
  RequireSameShape(lf0_wav, lf0_hat, "pitch loss");
  RequireSameShape(lf0_wav, mask, "pitch loss mask");
  if (lf0_wav.dim() == 1) return PitchLoss(lf0_wav.unsqueeze(0), lf0_hat.unsqueeze(0), mask.unsqueeze(0))[0];
  auto m = Rows(mask).to(lf0_hat.scalar_type());
  auto diff = Rows(lf0_wav - lf0_hat) * m;
  return Norm(diff) / m.sum(1).clamp_min(1.0);
}

torch::Tensor EnergyLoss(const torch::Tensor& log_energy, const torch::Tensor& log_energy_hat,
                         const torch::Tensor& mask) {
  RequireSameShape(log_energy, log_energy_hat, "energy loss");
  if (mask.defined()) RequireSameShape(log_energy, mask, "energy loss mask");
  if (log_energy.dim() == 1) {
    return EnergyLoss(log_energy.unsqueeze(0), log_energy_hat.unsqueeze(0),
                      mask.defined() ? mask.unsqueeze(0) : torch::Tensor())[0];
  }
  auto m = mask.defined() ? Rows(mask).to(log_energy_hat.scalar_type())
                          : torch::ones_like(Rows(log_energy_hat));
  auto diff = Rows(log_energy - log_energy_hat) * m;
  return Norm(diff) / torch::sqrt(m.sum(1).clamp_min(1.0));
}

torch::Tensor DurationLoss(const torch::Tensor& ratio_hat, const torch::Tensor& ratio,
                           const torch::Tensor& mask) {
  RequireSameShape(ratio_hat, ratio, "duration loss");
  RequireSameShape(ratio_hat, mask, "duration loss mask");
  if (ratio.dim() == 1) return DurationLoss(ratio_hat.unsqueeze(0), ratio.unsqueeze(0), mask.unsqueeze(0))[0];
  auto m = Rows(mask).to(ratio_hat.scalar_type());
  return (Rows(ratio_hat - ratio).pow(2) * m).sum(1) / m.sum(1).clamp_min(1.0);
}

torch::Tensor KlLoss(const torch::Tensor& z_p, const torch::Tensor& logs_q,
                     const torch::Tensor& m_p, const torch::Tensor& logs_p,
                     const torch::Tensor& logdet, const torch::Tensor& mask) {
  RequireSameShape(z_p, logs_q, "kl loss");
  RequireSameShape(z_p, m_p, "kl loss");
  RequireSameShape(z_p, logs_p, "kl loss");
  if (mask.dim() != 3 || mask.size(1) != 1 || mask.size(2) != z_p.size(2) ||
      logdet.dim() != 1 || logdet.size(0) != z_p.size(0)) {
    throw Error(ErrorCode::kShapeMismatch, "kl loss mask/logdet shape");
  }
  auto kl = logs_p - logs_q - 0.5 + 0.5 * (z_p - m_p).pow(2) * torch::exp(-2.0 * logs_p);
  auto total = (kl * mask).sum({1, 2}) - logdet;
  return total / mask.sum({1, 2}).clamp_min(1.0);
}

torch::Tensor MelLoss(const torch::Tensor& mel_hat, const torch::Tensor& mel) {
  RequireSameShape(mel_hat, mel, "mel loss");
  if (mel.dim() == 2) return MelLoss(mel_hat.unsqueeze(0), mel.unsqueeze(0))[0];
  return Rows(mel_hat - mel).abs().mean(1);
}

torch::Tensor DiscriminatorLoss(const std::vector<torch::Tensor>& real,
                                const std::vector<torch::Tensor>& fake) {
  if (real.size() != fake.size() || real.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "discriminator score lists differ");
  }
  auto loss = torch::zeros({}, real[0].options());
  for (size_t k = 0; k < real.size(); ++k) {
    loss = loss + (1.0 - real[k]).pow(2).mean() + fake[k].pow(2).mean();
  }
  return loss;
}

torch::Tensor GeneratorAdversarialLoss(const std::vector<torch::Tensor>& fake) {
  if (fake.empty()) throw Error(ErrorCode::kShapeMismatch, "no discriminator scores");
  auto loss = torch::zeros({}, fake[0].options());
  for (const auto& f : fake) loss = loss + (1.0 - f).pow(2).mean();
  return loss;
}

torch::Tensor FeatureMatchingLoss(const std::vector<std::vector<torch::Tensor>>& real,
                                  const std::vector<std::vector<torch::Tensor>>& fake) {
  if (real.size() != fake.size() || real.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "feature map lists differ");
  }
  auto loss = torch::zeros({}, real[0][0].options());
  for (size_t k = 0; k < real.size(); ++k) {
    if (real[k].size() != fake[k].size()) {
      throw Error(ErrorCode::kShapeMismatch, "feature map depth differs");
    }
    for (size_t l = 0; l < real[k].size(); ++l) {
      loss = loss + (real[k][l].detach() - fake[k][l]).abs().mean();
    }
  }
  return loss;
}

void to_json(nlohmann::json& j, const LossWeights& w) {
  j = {{"mel", w.mel},         {"kl", w.kl}, {"duration", w.duration}, {"pitch", w.pitch},
       {"energy", w.energy}, {"fm", w.fm}, {"adv", w.adv}};
}

void from_json(const nlohmann::json& j, LossWeights& w) {
  w.mel = j.value("mel", w.mel);
  w.kl = j.value("kl", w.kl);
  w.duration = j.value("duration", w.duration);
  w.pitch = j.value("pitch", w.pitch);
  w.energy = j.value("energy", w.energy);
  w.fm = j.value("fm", w.fm);
  w.adv = j.value("adv", w.adv);
}

torch::Tensor GeneratorTerms::Total(const LossWeights& w) const {
  auto total = w.mel * mel + w.kl * kl + w.duration * duration + w.pitch * pitch +
               w.fm * fm + w.adv * adv;
  if (energy.defined()) total = total + w.energy * energy;
  return total;
}

bool LossReport::AllFinite() const {
  for (double v : {l_pitch, l_energy, l_duration, l_kl, l_mel, l_adv_g, l_adv_d, l_fm,
                   total_g, total_d}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void to_json(nlohmann::json& j, const LossReport& r) {
  j = {{"step", r.step},       {"l_pitch", r.l_pitch}, {"l_energy", r.l_energy},
       {"l_duration", r.l_duration}, {"l_kl", r.l_kl}, {"l_mel", r.l_mel},
       {"l_adv_g", r.l_adv_g}, {"l_adv_d", r.l_adv_d}, {"l_fm", r.l_fm},
       {"total_g", r.total_g}, {"total_d", r.total_d}, {"lr", r.lr}};
}

void from_json(const nlohmann::json& j, LossReport& r) {
  r.step = j.at("step").get<int64_t>();
  r.l_pitch = j.at("l_pitch").get<double>();
  r.l_energy = j.at("l_energy").get<double>();
  r.l_duration = j.at("l_duration").get<double>();
  r.l_kl = j.at("l_kl").get<double>();
  r.l_mel = j.at("l_mel").get<double>();
  r.l_adv_g = j.at("l_adv_g").get<double>();
  r.l_adv_d = j.at("l_adv_d").get<double>();
  r.l_fm = j.at("l_fm").get<double>();
  r.total_g = j.at("total_g").get<double>();
  r.total_d = j.at("total_d").get<double>();
  r.lr = j.value("lr", 0.0);
}

LossReport MakeReport(const GeneratorTerms& terms, const LossWeights& w,
                      const torch::Tensor& total_d, int64_t step) {
  auto value = [](const torch::Tensor& t) {
    return t.defined() ? t.detach().item<double>() : 0.0;
  };
  LossReport r;
  r.step = step;
  r.l_pitch = value(terms.pitch);
  r.l_energy = value(terms.energy);
  r.l_duration = value(terms.duration);
  r.l_kl = value(terms.kl);
  r.l_mel = value(terms.mel);
  r.l_adv_g = value(terms.adv);
  r.l_fm = value(terms.fm);
  r.l_adv_d = value(total_d);
  r.total_d = r.l_adv_d;
  r.total_g = w.mel * r.l_mel + w.kl * r.l_kl + w.duration * r.l_duration +
              w.pitch * r.l_pitch + w.energy * r.l_energy + w.fm * r.l_fm + w.adv * r.l_adv_g;
  if (!r.AllFinite()) {
    throw Error(ErrorCode::kNonFiniteLoss, nlohmann::json(r).dump());
  }
  return r;
}

}  // namespace svs
