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

#include "svs/training/trainer.h"

#include <filesystem>
#include <fstream>
#include <numeric>

#include "svs/base/error.h"
#include "svs/base/hash.h"
#include "svs/base/log.h"
#include "svs/corpus/split.h"
#include "svs/dsp/features.h"
#include "svs/nn/layers.h"
#include "svs/training/checkpoint.h"

namespace svs {

namespace fs = std::filesystem;

int64_t FrameAudioOffset(const StftConfig& stft) {
  return (stft.window_length - stft.hop_length) / 2;
}

torch::Tensor TargetSegments(const Batch& batch, const GeneratorOutputs& out,
                             const StftConfig& stft) {
  const int64_t hop = stft.hop_length;
  const int64_t segment = out.y_hat.size(-1) / hop;
  auto audio = batch.audio.slice(1, FrameAudioOffset(stft)).unsqueeze(1);
  return SliceAt(audio, out.slice_starts, segment, hop).to(out.y_hat.scalar_type());
}

UtteranceLosses ComputeUtteranceLosses(const Batch& batch, const GeneratorOutputs& out) {
  const auto& p = out.prior;
  const auto dtype = p.pred_lf0_hat.scalar_type();
  UtteranceLosses l;
  // Rest frames carry no note pitch, so r * 0 cannot match anything there.
  auto voiced = p.frame_mask & (batch.voicing > 0.5) & (p.note_lf0_frames > 0);
  l.pitch = PitchLoss(batch.targets.lf0.to(dtype), p.pred_lf0_hat, voiced);
  if (p.pred_log_energy.defined()) {
    l.energy = EnergyLoss(batch.targets.log_energy.to(dtype), p.pred_log_energy, p.frame_mask);
  } else {
    l.energy = torch::zeros({p.frame_mask.size(0)}, p.pred_lf0_hat.options());
  }
  l.duration = DurationLoss(p.duration_ratio, batch.duration_ratio.to(dtype),
                            batch.inputs.score.phoneme_mask);
  l.kl = KlLoss(out.z_p, out.posterior.logstd, p.prior_mean, p.prior_logstd, out.logdet,
                out.spec_mask);
  return l;
}

GeneratorTerms ComputeGeneratorTerms(const Batch& batch, const GeneratorOutputs& out,
                                     const torch::Tensor& target_audio,
                                     const FeatureConfig& features,
                                     const DiscriminatorOutputs* real,
                                     const DiscriminatorOutputs* fake) {
  auto u = ComputeUtteranceLosses(batch, out);
  GeneratorTerms t;
  t.pitch = u.pitch.mean();
  t.energy = u.energy.mean();
  t.duration = u.duration.mean();
  t.kl = u.kl.mean();
  torch::Tensor mel;
  {
    torch::NoGradGuard no_grad;
    mel = LogMelSpectrogram(target_audio.squeeze(1), features, 1e-9);
  }
  auto mel_hat = LogMelSpectrogram(out.y_hat.squeeze(1), features, 1e-9);
  t.mel = MelLoss(mel_hat, mel).mean();
  auto zero = torch::zeros({}, out.y_hat.options());
  if (real != nullptr && fake != nullptr) {
    t.adv = GeneratorAdversarialLoss(fake->scores);
    t.fm = FeatureMatchingLoss(real->fmaps, fake->fmaps);
  } else {
    t.adv = zero;
    t.fm = zero;
  }
  return t;
}

std::vector<std::vector<size_t>> BucketBatches(const std::vector<int64_t>& frames,
                                               int64_t batch_size) {
  if (batch_size < 1) throw Error(ErrorCode::kConfigInvalid, "batch_size must be positive");
  std::vector<size_t> idx(frames.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return frames[a] < frames[b]; });
  std::vector<std::vector<size_t>> batches;
  for (size_t i = 0; i < idx.size(); i += batch_size) {
    const size_t end = std::min(idx.size(), i + static_cast<size_t>(batch_size));
    batches.emplace_back(idx.begin() + i, idx.begin() + end);
  }
  return batches;
}

Trainer::Trainer(const RunConfig& config, const std::string& data_dir,
                 const std::string& out_dir)
    : config_(config), out_dir_(out_dir) {
  config_.Validate();
  torch::set_num_threads(std::max(1, config_.train.threads));
  torch::manual_seed(config_.train.seed);

  train_ids_ = LoadSplit((fs::path(data_dir) / "split.json").string()).train;
  if (config_.train.max_utterances > 0 &&
      static_cast<int64_t>(train_ids_.size()) > config_.train.max_utterances) {
    train_ids_.resize(config_.train.max_utterances);
  }
  if (train_ids_.empty()) throw Error(ErrorCode::kInsufficientData, "no training utterances");
  items_ = LoadTrainingItems(data_dir, config_, train_ids_);
  std::vector<int64_t> frames;
  for (const auto& it : items_) frames.push_back(it.frames());
  batches_ = BucketBatches(frames, config_.train.batch_size);

  model_ = Synthesizer(config_.model, config_.pitch_quantizer, config_.energy_quantizer);
  discriminator_ = MultiDiscriminator(config_.model);
  const auto& o = config_.optimizer;
  auto opts = [&] {
    return torch::optim::AdamWOptions(o.lr0)
        .betas({o.beta1, o.beta2})
        .eps(o.epsilon)
        .weight_decay(o.weight_decay);
  };
  opt_g_ = std::make_unique<torch::optim::AdamW>(model_->parameters(), opts());
  opt_d_ = std::make_unique<torch::optim::AdamW>(discriminator_->parameters(), opts());

  try {
    fs::create_directories(fs::path(out_dir_) / "checkpoints");
    std::ofstream(fs::path(out_dir_) / "loss_log.jsonl", std::ios::trunc);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kWriteFailure, out_dir_ + ": " + e.what());
  }
  config_.Save((fs::path(out_dir_) / "config.json").string());
  SVS_LOG(INFO) << "training on " << items_.size() << " utterances, " << batches_.size()
                << " batches per epoch, " << model_->ParameterCount() << " generator parameters";
}

double Trainer::CurrentLearningRate() const {
  return config_.optimizer.LearningRate(epoch(), step_);
}

const std::vector<size_t>& Trainer::NextBatch() {
  const int64_t e = epoch();
  if (e != order_epoch_) {
    order_.resize(batches_.size());
    std::iota(order_.begin(), order_.end(), 0);
    SplitMix64 rng(config_.train.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(e + 1)));
    for (size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[rng.Below(i)]);
    order_epoch_ = e;
  }
  return batches_[order_[step_ % steps_per_epoch()]];
}

namespace {

void SetLearningRate(torch::optim::Optimizer& opt, double lr) {
  for (auto& group : opt.param_groups()) {
    static_cast<torch::optim::AdamWOptions&>(group.options()).lr(lr);
  }
}

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string s;
  for (const auto& id : ids) s += (s.empty() ? "" : ",") + id;
  return s;
}

}  // namespace

LossReport Trainer::Step() {
  const auto& picked = NextBatch();
  std::vector<const TrainingItem*> ptrs;
  for (size_t i : picked) ptrs.push_back(&items_[i]);
  Batch batch = Collate(ptrs, config_.model.semantic.input_dim);
  batch.targets.teacher_forcing = step_ < config_.train.teacher_forcing_steps;

  const double lr = CurrentLearningRate();
  SetLearningRate(*opt_g_, lr);
  SetLearningRate(*opt_d_, lr);
  model_->train();
  discriminator_->train();

  auto out = model_->forward(batch.inputs, batch.targets, batch.linear,
                             config_.train.segment_frames);
  auto y = TargetSegments(batch, out, config_.features.stft);

  auto real = discriminator_->forward(y);
  auto fake = discriminator_->forward(out.y_hat.detach());
  auto loss_d = DiscriminatorLoss(real.scores, fake.scores);
  if (!std::isfinite(loss_d.item<double>())) {
    SVS_LOG(ERROR) << "step " << step_ << ": non-finite discriminator loss, batch "
                   << JoinIds(batch.ids);
    throw Error(ErrorCode::kNonFiniteLoss, "discriminator loss, batch " + JoinIds(batch.ids));
  }
  opt_d_->zero_grad();
  loss_d.backward();
  opt_d_->step();

  DiscriminatorOutputs real_g;
  {
    torch::NoGradGuard no_grad;
    real_g = discriminator_->forward(y);
  }
  auto fake_g = discriminator_->forward(out.y_hat);
  auto terms = ComputeGeneratorTerms(batch, out, y, config_.features, &real_g, &fake_g);
  LossReport report;
  try {
    report = MakeReport(terms, config_.loss_weights, loss_d, step_);
  } catch (const Error& e) {
    SVS_LOG(ERROR) << "step " << step_ << ": " << e.what() << ", batch " << JoinIds(batch.ids);
    throw Error(ErrorCode::kNonFiniteLoss, std::string(e.what()) + ", batch " +
                                               JoinIds(batch.ids));
  }
  report.lr = lr;
  opt_g_->zero_grad();
  terms.Total(config_.loss_weights).backward();
  opt_g_->step();
  ++step_;

  std::ofstream log(fs::path(out_dir_) / "loss_log.jsonl", std::ios::app);
  log << nlohmann::json(report).dump() << "\n";
  if (!log) throw Error(ErrorCode::kWriteFailure, "cannot append to loss log");
  return report;
}

CheckpointRecord Trainer::SaveCheckpointNow() {
  CheckpointRecord rec;
  rec.step = step_;
  rec.path = (fs::path(out_dir_) / "checkpoints" / ("step_" + std::to_string(step_) + ".pt"))
                 .string();
  {
    torch::NoGradGuard no_grad;
    model_->eval();
    std::vector<const TrainingItem*> ptrs;
    for (size_t i : batches_.front()) ptrs.push_back(&items_[i]);
    Batch batch = Collate(ptrs, config_.model.semantic.input_dim);
    auto mask = nn::SequenceMask(batch.frame_lengths, batch.linear.size(2))
                    .unsqueeze(1)
                    .to(torch::kFloat);
    auto post = model_->posterior()->forward(batch.linear, mask, true);
    rec.flow_round_trip = model_->flow()->RoundTripError(post.z, mask);
  }
  SaveCheckpoint(rec.path, model_, &discriminator_, config_, step_);
  const std::string latest = (fs::path(out_dir_) / "checkpoint.pt").string();
  try {
    fs::copy_file(rec.path, latest + ".tmp", fs::copy_options::overwrite_existing);
    fs::rename(latest + ".tmp", latest);
    std::ofstream side(fs::path(rec.path).replace_extension(".json"));
    side << nlohmann::json{{"step", rec.step}, {"flow_round_trip", rec.flow_round_trip}}.dump(2)
         << "\n";
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kCheckpointWriteFailure, latest + ": " + e.what());
  }
  checkpoints_.push_back(rec);
  SVS_LOG(INFO) << "checkpoint " << rec.path << " (flow round trip " << rec.flow_round_trip
                << ")";
  return rec;
}

std::vector<LossReport> Trainer::Run(const std::function<void(const LossReport&)>& on_step) {
  std::vector<LossReport> reports;
  const int64_t every = config_.train.checkpoint_every;
  while (step_ < config_.train.steps) {
    auto r = Step();
    if (on_step) on_step(r);
    reports.push_back(r);
    if (step_ % 50 == 0 || step_ == 1) {
      SVS_LOG(INFO) << "step " << step_ << " mel " << r.l_mel << " kl " << r.l_kl << " pitch "
                    << r.l_pitch << " dur " << r.l_duration << " g " << r.total_g << " d "
                    << r.total_d;
    }
    if (every > 0 && step_ % every == 0 && step_ < config_.train.steps) SaveCheckpointNow();
  }
  SaveCheckpointNow();
  return reports;
}

}  // namespace svs
