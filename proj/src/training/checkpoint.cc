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

#include "svs/training/checkpoint.h"

#include <filesystem>

#include "svs/base/error.h"

namespace svs {

namespace {

void WriteModule(torch::serialize::OutputArchive& archive, const std::string& prefix,
                 const torch::nn::Module& module) {
  for (const auto& p : module.named_parameters()) archive.write(prefix + p.key(), p.value());
  for (const auto& b : module.named_buffers()) archive.write(prefix + b.key(), b.value(), true);
}

void ReadModule(torch::serialize::InputArchive& archive, const std::string& prefix,
                torch::nn::Module& module) {
  torch::NoGradGuard no_grad;
  for (auto& p : module.named_parameters()) {
    torch::Tensor t;
    if (!archive.try_read(prefix + p.key(), t)) {
      throw Error(ErrorCode::kConfigHashMismatch, "checkpoint lacks " + prefix + p.key());
    }
    if (t.sizes() != p.value().sizes()) {
      throw Error(ErrorCode::kConfigHashMismatch, "shape of " + prefix + p.key());
    }
    p.value().copy_(t);
  }
  for (auto& b : module.named_buffers()) {
    torch::Tensor t;
    if (archive.try_read(prefix + b.key(), t, true)) b.value().copy_(t);
  }
}

torch::serialize::InputArchive Open(const std::string& path) {
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path);
  } catch (const c10::Error& e) {
    throw Error(ErrorCode::kIoError, "cannot read checkpoint " + path);
  }
  return archive;
}

CheckpointInfo Info(torch::serialize::InputArchive& archive) {
  c10::IValue config, hash, step;
  archive.read("config", config);
  archive.read("config_hash", hash);
  archive.read("step", step);
  CheckpointInfo info;
  info.config = nlohmann::json::parse(config.toStringRef()).get<RunConfig>();
  info.config_hash = hash.toStringRef();
  info.step = step.toInt();
  return info;
}

}  // namespace

void SaveCheckpoint(const std::string& path, Synthesizer& model,
                    MultiDiscriminator* discriminator, const RunConfig& config, int64_t step) {
  torch::serialize::OutputArchive archive;
  WriteModule(archive, "g.", *model);
  if (discriminator != nullptr) WriteModule(archive, "d.", **discriminator);
  archive.write("config", c10::IValue(nlohmann::json(config).dump()));
  archive.write("config_hash", c10::IValue(config.Hash()));
  archive.write("step", c10::IValue(step));
  const std::string tmp = path + ".tmp";
  try {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    archive.save_to(tmp);
    std::filesystem::rename(tmp, path);
  } catch (const std::exception& e) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kCheckpointWriteFailure, path + ": " + e.what());
  }
}

CheckpointInfo ReadCheckpointInfo(const std::string& path) {
  auto archive = Open(path);
  return Info(archive);
}

CheckpointInfo LoadCheckpoint(const std::string& path, const RunConfig& runtime,
                              Synthesizer& model, MultiDiscriminator* discriminator) {
  auto archive = Open(path);
  auto info = Info(archive);
  if (info.config_hash != runtime.Hash()) {
    throw Error(ErrorCode::kConfigHashMismatch,
                path + " was trained with config " + info.config_hash + ", runtime config is " +
                    runtime.Hash());
  }
  ReadModule(archive, "g.", *model);
  if (discriminator != nullptr) ReadModule(archive, "d.", **discriminator);
  return info;
}

Synthesizer LoadSynthesizer(const std::string& path, CheckpointInfo* info) {
  auto meta = ReadCheckpointInfo(path);
  Synthesizer model(meta.config.model, meta.config.pitch_quantizer, meta.config.energy_quantizer);
  auto loaded = LoadCheckpoint(path, meta.config, model);
  if (info != nullptr) *info = loaded;
  model->eval();
  return model;
}

}  // namespace svs
