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

#include "svs/training/data.h"

#include <algorithm>
#include <filesystem>
#include <map>

#include "svs/base/error.h"
#include "svs/base/hash.h"
#include "svs/base/log.h"
#include "svs/corpus/audio.h"
#include "svs/corpus/manifest.h"
#include "svs/corpus/split.h"
#include "svs/corpus/transcription.h"
#include "svs/dsp/features.h"

namespace svs {

namespace fs = std::filesystem;

namespace {

std::string FeatureHash(const FeatureConfig& f) {
  return HexDigest(Fnv1a64(nlohmann::json(f).dump()));
}

std::string ProviderHash(const ProviderConfig& p) {
  return HexDigest(Fnv1a64(nlohmann::json(p).dump()));
}

void SaveArchive(const std::string& path,
                 const std::vector<std::pair<std::string, torch::Tensor>>& tensors,
                 const std::string& hash) {
  torch::serialize::OutputArchive archive;
  for (const auto& [name, t] : tensors) archive.write(name, t);
  archive.write("hash", c10::IValue(hash));
  const std::string tmp = path + ".tmp";
  try {
    archive.save_to(tmp);
  } catch (const c10::Error& e) {
    throw Error(ErrorCode::kWriteFailure, "cannot write " + path);
  }
  fs::rename(tmp, path);
}

torch::serialize::InputArchive OpenArchive(const std::string& path, const std::string& hash) {
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path);
  } catch (const c10::Error& e) {
    throw Error(ErrorCode::kIoError, "cannot read cache " + path);
  }
  c10::IValue stored;
  archive.read("hash", stored);
  if (stored.toStringRef() != hash) {
    throw Error(ErrorCode::kConfigHashMismatch,
                path + " was prepared with different settings; rerun prepare-data");
  }
  return archive;
}

torch::Tensor ReadTensor(torch::serialize::InputArchive& archive, const std::string& name) {
  torch::Tensor t;
  archive.read(name, t);
  return t;
}

}  // namespace

TextFrontend TextFrontend::Load(const std::string& dir,
                                const std::vector<std::string>& vocabulary) {
  TextFrontend f;
  f.lexicon = PinyinLexicon::Load(dir + "/lexicon.txt");
  f.dict = PhonemeDict::Load(dir + "/opencpop-strict.txt");
  f.vocab = vocabulary.empty() ? PhonemeVocabulary::FromDict(f.dict)
                               : PhonemeVocabulary(vocabulary);
  return f;
}

ScoreItem MakeScoreItem(const Utterance& utt, const TextFrontend& frontend,
                        const FeatureConfig& features, const torch::Tensor& word_vectors) {
  ScoreItem item;
  item.id = utt.id;
  item.score = BuildScoreFeatures(utt, frontend.vocab, features.sample_rate, features.stft);
  auto plan = BuildExpansionPlan(utt.text, utt.phonemes, frontend.lexicon, frontend.dict);
  item.source_index = plan.SourceWords();
  if (word_vectors.size(0) != static_cast<int64_t>(plan.n1.size())) {
    throw Error(ErrorCode::kPlanMismatch, utt.id + ": word vectors do not match lyric length");
  }
  item.word_vectors = word_vectors;
  return item;
}

ScoreItem MakeScoreItem(const Utterance& utt, const TextFrontend& frontend,
                        const FeatureConfig& features, const SemanticProvider& provider) {
  return MakeScoreItem(utt, frontend, features, EmbedWords(utt.text, provider).vectors);
}

ModelInputs CollateInputs(const std::vector<const ScoreItem*>& items, int64_t semantic_dim) {
  const int64_t b = static_cast<int64_t>(items.size());
  int64_t n = 1, w = 1;
  for (const auto* it : items) {
    n = std::max<int64_t>(n, it->score.size());
    w = std::max<int64_t>(w, it->word_vectors.size(0));
  }
  ModelInputs in;
  auto& s = in.score;
  s.phoneme_ids = torch::zeros({b, n}, torch::kLong);
  s.note_pitch_ids = torch::zeros({b, n}, torch::kLong);
  s.note_frames = torch::zeros({b, n}, torch::kLong);
  s.slur_ids = torch::zeros({b, n}, torch::kLong);
  s.note_lf0 = torch::zeros({b, n}, torch::kFloat);
  s.phoneme_mask = torch::zeros({b, n}, torch::kBool);
  in.word_vectors = torch::zeros({b, w, semantic_dim}, torch::kFloat);
  in.word_mask = torch::zeros({b, w}, torch::kBool);
  in.source_index = torch::full({b, n}, -1, torch::kLong);
  for (int64_t i = 0; i < b; ++i) {
    const auto& f = items[i]->score;
    const int64_t len = static_cast<int64_t>(f.size());
    auto row = [&](const std::vector<int64_t>& v) { return torch::tensor(v, torch::kLong); };
    s.phoneme_ids[i].slice(0, 0, len).copy_(row(f.phoneme_ids));
    s.note_pitch_ids[i].slice(0, 0, len).copy_(row(f.note_pitch_ids));
    s.note_frames[i].slice(0, 0, len).copy_(row(f.note_frame_counts));
    s.slur_ids[i].slice(0, 0, len).copy_(row(f.slur_ids));
    s.note_lf0[i].slice(0, 0, len).copy_(torch::tensor(f.note_lf0, torch::kDouble));
    s.phoneme_mask[i].slice(0, 0, len).fill_(true);
    in.source_index[i].slice(0, 0, len).copy_(row(items[i]->source_index));
    const int64_t words = items[i]->word_vectors.size(0);
    if (words > 0) {
      if (items[i]->word_vectors.size(1) != semantic_dim) {
        throw Error(ErrorCode::kShapeMismatch, "word vector dimension mismatch");
      }
      in.word_vectors[i].slice(0, 0, words).copy_(items[i]->word_vectors);
      in.word_mask[i].slice(0, 0, words).fill_(true);
    }
  }
  return in;
}

Batch Collate(const std::vector<const TrainingItem*>& items, int64_t semantic_dim) {
  std::vector<const ScoreItem*> inputs;
  int64_t t = 1, samples = 1, bins = 0;
  for (const auto* it : items) {
    inputs.push_back(&it->input);
    t = std::max(t, it->frames());
    samples = std::max(samples, it->audio.size(0));
    bins = it->linear.size(0);
  }
  const int64_t b = static_cast<int64_t>(items.size());
  Batch batch;
  batch.inputs = CollateInputs(inputs, semantic_dim);
  const int64_t n = batch.inputs.score.phoneme_ids.size(1);
  batch.targets.durations = torch::zeros({b, n}, torch::kLong);
  batch.targets.lf0 = torch::zeros({b, t});
  batch.targets.log_energy = torch::zeros({b, t});
  batch.linear = torch::zeros({b, bins, t});
  batch.voicing = torch::zeros({b, t});
  batch.frame_lengths = torch::zeros({b}, torch::kLong);
  batch.audio = torch::zeros({b, samples});
  for (int64_t i = 0; i < b; ++i) {
    const auto* it = items[i];
    const int64_t f = it->frames();
    batch.ids.push_back(it->input.id);
    batch.targets.durations[i].slice(0, 0, it->durations.size())
        .copy_(torch::tensor(it->durations, torch::kLong));
    batch.targets.lf0[i].slice(0, 0, f).copy_(it->lf0);
    batch.targets.log_energy[i].slice(0, 0, f).copy_(it->log_energy);
    batch.linear[i].slice(1, 0, f).copy_(it->linear);
    batch.voicing[i].slice(0, 0, f).copy_(it->voicing);
    batch.frame_lengths[i] = f;
    batch.audio[i].slice(0, 0, it->audio.size(0)).copy_(it->audio);
  }
  auto notes = batch.inputs.score.note_frames.to(torch::kFloat).clamp_min(1.0);
  batch.duration_ratio = batch.targets.durations.to(torch::kFloat) / notes;
  return batch;
}

torch::Tensor LogEnergy(const torch::Tensor& energy, double floor) {
  return torch::log(torch::clamp_min(energy, floor));
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kInsufficientData, "percentile of nothing");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

PrepareSummary PrepareData(const PrepareOptions& options, const RunConfig& base,
                           RunConfig* written) {
  base.features.Validate();
  const fs::path corpus(options.corpus_dir);
  const fs::path out(options.out_dir);
  const int sr = base.features.sample_rate;
  for (const char* f : {"lexicon.txt", "opencpop-strict.txt", "segments/transcriptions.txt"}) {
    if (!fs::exists(corpus / f)) {
      throw Error(ErrorCode::kIoError, "corpus is missing " + (corpus / f).string());
    }
  }
  fs::create_directories(out / "wavs");
  fs::create_directories(out / "features");
  fs::create_directories(out / "embeddings");
  fs::copy_file(corpus / "lexicon.txt", out / "lexicon.txt",
                fs::copy_options::overwrite_existing);
  fs::copy_file(corpus / "opencpop-strict.txt", out / "opencpop-strict.txt",
                fs::copy_options::overwrite_existing);
  auto frontend = TextFrontend::Load(out.string(), {});
  auto provider = MakeProvider(base.provider);
  const std::string feature_hash = FeatureHash(base.features);
  const std::string provider_hash = ProviderHash(base.provider);

  PrepareSummary summary;
  std::vector<ManifestRecord> records;
  std::map<std::string, std::vector<double>> log_energy;
  for (const auto& entry :
       LoadTranscriptions((corpus / "segments/transcriptions.txt").string(), frontend.dict)) {
    if (options.max_utterances > 0 &&
        static_cast<int64_t>(records.size()) >= options.max_utterances) {
      break;
    }
    const std::string where = "line " + std::to_string(entry.line_number);
    if (entry.error) {
      summary.skipped.push_back(where + ": " + entry.error->what());
      continue;
    }
    Utterance utt = *entry.utterance;
    try {
      auto wave = IngestAudio((corpus / "segments/wavs" / (utt.id + ".wav")).string(), sr);
      auto feats = ComputeFrameFeatures(wave, base.features);
      PhonemeFrameDurations(utt, sr, base.features.stft, feats.num_frames());
      auto words = EmbedWords(utt.text, *provider);
      MakeScoreItem(utt, frontend, base.features, words.vectors);  // checks alignment

      utt.audio_path = "wavs/" + utt.id + ".wav";
      WriteWav((out / utt.audio_path).string(), wave);
      SaveArchive((out / "features" / (utt.id + ".pt")).string(),
                  {{"linear", feats.linear_spec},
                   {"mel", feats.mel_spec},
                   {"energy", feats.energy},
                   {"lf0", feats.lf0},
                   {"voicing", feats.voicing},
                   {"audio", WaveformTensor(wave)}},
                  feature_hash);
      SaveArchive((out / "embeddings" / (utt.id + ".pt")).string(),
                  {{"vectors", words.vectors}}, provider_hash);
      auto le = LogEnergy(feats.energy.to(torch::kDouble), base.features.energy_floor);
      log_energy[utt.id] = std::vector<double>(le.data_ptr<double>(),
                                               le.data_ptr<double>() + le.numel());
      records.push_back({utt, sr, static_cast<int64_t>(wave.samples.size())});
    } catch (const Error& e) {
      summary.skipped.push_back(where + " (" + utt.id + "): " + e.what());
    }
  }
  for (const auto& s : summary.skipped) SVS_LOG(WARNING) << "skipped " << s;
  if (records.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "need at least 2 usable utterances, got " + std::to_string(records.size()));
  }
  WriteManifest((out / "manifest.jsonl").string(), records);

  std::vector<std::string> ids;
  for (const auto& r : records) ids.push_back(r.utterance.id);
  const int64_t n = static_cast<int64_t>(ids.size());
  int64_t n_eval = options.n_eval >= 0
                       ? options.n_eval
                       : std::max<int64_t>(1, std::llround(n * 206.0 / 3756.0));
  n_eval = std::clamp<int64_t>(n_eval, 1, n - 1);
  auto split = SplitDataset(ids, static_cast<size_t>(n - n_eval), options.seed);
  SaveSplit((out / "split.json").string(), split);

  std::vector<double> train_energy;
  for (const auto& id : split.train) {
    const auto& v = log_energy[id];
    train_energy.insert(train_energy.end(), v.begin(), v.end());
  }
  RunConfig cfg = base;
  cfg.vocabulary = frontend.vocab.symbols();
  cfg.model.vocab_size = frontend.vocab.size();
  cfg.model.spec_bins = base.features.stft.num_bins();
  cfg.energy_quantizer.n_bins = static_cast<int>(cfg.model.n_energy_bins);
  cfg.energy_quantizer.lo = Percentile(train_energy, 0.1);
  cfg.energy_quantizer.hi = Percentile(train_energy, 99.9);
  if (!(cfg.energy_quantizer.hi > cfg.energy_quantizer.lo)) {
    cfg.energy_quantizer.hi = cfg.energy_quantizer.lo + 1.0;
  }
  cfg.model.n_pitch_bins = cfg.pitch_quantizer.table_size();
  cfg.Validate();
  cfg.Save((out / "config.json").string());
  if (written != nullptr) *written = cfg;

  summary.n_utterances = n;
  summary.n_train = static_cast<int64_t>(split.train.size());
  summary.n_eval = static_cast<int64_t>(split.eval.size());
  return summary;
}

std::vector<TrainingItem> LoadTrainingItems(const std::string& data_dir, const RunConfig& config,
                                            const std::vector<std::string>& ids) {
  const fs::path dir(data_dir);
  std::map<std::string, Utterance> by_id;
  for (auto& r : ReadManifest((dir / "manifest.jsonl").string())) {
    by_id[r.utterance.id] = r.utterance;
  }
  auto frontend = TextFrontend::Load(data_dir, config.vocabulary);
  const std::string feature_hash = FeatureHash(config.features);
  const std::string provider_hash = ProviderHash(config.provider);
  std::vector<TrainingItem> items;
  items.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error(ErrorCode::kIoError, "id " + id + " not in manifest");
    TrainingItem item;
    item.utterance = it->second;
    auto feats = OpenArchive((dir / "features" / (id + ".pt")).string(), feature_hash);
    item.linear = ReadTensor(feats, "linear");
    item.mel = ReadTensor(feats, "mel");
    item.energy = ReadTensor(feats, "energy");
    item.lf0 = ReadTensor(feats, "lf0");
    item.voicing = ReadTensor(feats, "voicing");
    item.audio = ReadTensor(feats, "audio");
    item.log_energy = LogEnergy(item.energy, config.features.energy_floor);
    auto emb = OpenArchive((dir / "embeddings" / (id + ".pt")).string(), provider_hash);
    item.input = MakeScoreItem(item.utterance, frontend, config.features,
                               ReadTensor(emb, "vectors"));
    item.durations = PhonemeFrameDurations(item.utterance, config.features.sample_rate,
                                           config.features.stft, item.frames());
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace svs
