// Copyright 2026 The dscreen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dscreen/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dscreen/checkpoint.h"
#include "dscreen/dataset_io.h"
#include "dscreen/digest.h"
#include "dscreen/training.h"

namespace dscreen {
namespace fs = std::filesystem;

Selection Selection::FromConfig(const ExperimentConfig& config) {
  if (config.top_k) return TopK(*config.top_k);
  if (config.threshold) return Threshold(*config.threshold);
  throw std::invalid_argument("config has no selection");
}

std::string Selection::Tag() const {
  if (top_k) return "k" + std::to_string(*top_k);
  if (threshold) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "t%.6g", *threshold);
    return buffer;
  }
  throw std::invalid_argument("empty selection");
}

Pipeline::Pipeline(ExperimentConfig config, bool force)
    : config_(std::move(config)), force_(force) {
  config_.train.seed = config_.seed;
  fs::create_directories(config_.output_dir);
  WriteArtifact("config.txt",
                [&](std::ostream& out) { out << config_.Serialize(); });
}

fs::path Pipeline::ArtifactPath(std::string_view name) const {
  return config_.output_dir / std::string(name);
}

void Pipeline::Log(const std::string& message) const {
  if (logger_) logger_(message);
}

template <typename Fn>
auto Pipeline::RunStage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void Pipeline::WriteArtifact(std::string_view name,
                             const std::function<void(std::ostream&)>& body) {
  const fs::path path = ArtifactPath(name);
  fs::path partial = path;
  partial += ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + partial.string());
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + partial.string());
  }
  fs::rename(partial, path);
}

void Pipeline::UpdateManifest() {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(config_.output_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == "manifest.txt" || name.ends_with(".partial")) continue;
    names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  WriteArtifact("manifest.txt", [&](std::ostream& out) {
    for (const auto& name : names) {
      out << name << "\tfnv1a64:" << HexDigest(DigestFile(ArtifactPath(name)))
          << '\n';
    }
  });
}

// ------------------------------------------------------------------ ingest

void Pipeline::Ingest() {
  RunStage("ingest", [&] {
    const bool cached = fs::exists(ArtifactPath("dictionary.txt")) &&
                        fs::exists(ArtifactPath("train.enc")) &&
                        fs::exists(ArtifactPath("test.enc"));
    if (cached && !force_) {
      dictionary_ = Dictionary::Load(ArtifactPath("dictionary.txt"));
      std::ifstream train_in(ArtifactPath("train.enc"), std::ios::binary);
      train_docs_ = ReadEncodedDocuments(train_in);
      std::ifstream test_in(ArtifactPath("test.enc"), std::ios::binary);
      test_docs_ = ReadEncodedDocuments(test_in);
      if (!train_docs_->empty() &&
          train_docs_->front().length() != config_.model.sequence_length) {
        throw std::runtime_error(
            "persisted corpus length differs from model.sequence_length");
      }
      return;
    }
    config_.Validate();
    Log("[ingest] reading " + config_.train_path.string());
    const auto raw_train = ReadCsvDataset(config_.train_path);
    const auto raw_test = ReadCsvDataset(config_.test_path);
    if (raw_train.empty()) throw std::runtime_error("training set is empty");
    const auto train_tokens = TokenizeDocuments(raw_train, config_.tokenizer);
    const auto test_tokens = TokenizeDocuments(raw_test, config_.tokenizer);
    dictionary_ = Dictionary::Build(train_tokens, config_.min_count,
                                    config_.max_dictionary_size);
    const std::size_t length = config_.model.sequence_length;
    auto encode_all = [&](const std::vector<RawDocument>& raw,
                          const std::vector<std::vector<std::string>>& tokens) {
      std::vector<EncodedDocument> docs;
      docs.reserve(raw.size());
      for (std::size_t i = 0; i < raw.size(); ++i) {
        docs.push_back(Encode(tokens[i], *dictionary_, length, raw[i].label));
      }
      return docs;
    };
    train_docs_ = encode_all(raw_train, train_tokens);
    test_docs_ = encode_all(raw_test, test_tokens);
    WriteArtifact("dictionary.txt",
                  [&](std::ostream& out) { dictionary_->Write(out); });
    WriteArtifact("train.enc", [&](std::ostream& out) {
      WriteEncodedDocuments(out, *train_docs_, length);
    });
    WriteArtifact("test.enc", [&](std::ostream& out) {
      WriteEncodedDocuments(out, *test_docs_, length);
    });
    ++counters_.ingest;
    Log("[ingest] D=" + std::to_string(dictionary_->size()) +
        " train=" + std::to_string(train_docs_->size()) +
        " test=" + std::to_string(test_docs_->size()));
    UpdateManifest();
  });
}

const Dictionary& Pipeline::dictionary() {
  if (!dictionary_) Ingest();
  return *dictionary_;
}

std::span<const EncodedDocument> Pipeline::train_docs() {
  if (!train_docs_) Ingest();
  return *train_docs_;
}

std::span<const EncodedDocument> Pipeline::test_docs() {
  if (!test_docs_) Ingest();
  return *test_docs_;
}

ModelConfig Pipeline::benchmark_config() {
  ModelConfig model = config_.model;
  model.dictionary_size = dictionary().size();
  if (model.num_classes == 0) {
    ClassId top = 0;
    for (const auto& doc : train_docs()) top = std::max(top, doc.label());
    for (const auto& doc : test_docs()) top = std::max(top, doc.label());
    model.num_classes = top;
  }
  return model;
}

// ------------------------------------------------------------------- train

void Pipeline::TrainBenchmark() {
  RunStage("train", [&] {
    const ModelConfig model_config = benchmark_config();
    const fs::path ckpt = ArtifactPath("benchmark.ckpt");
    if (fs::exists(ckpt) && !force_) {
      benchmark_ = LoadCheckpoint(ckpt);
      if (!(benchmark_->config() == model_config)) {
        throw std::runtime_error("benchmark.ckpt does not match the config (" +
                                 benchmark_->config().Describe() + " vs " +
                                 model_config.Describe() + ")");
      }
      return;
    }
    Log("[train] " + model_config.Describe());
    auto result = Train(Model::Initialized(model_config, config_.seed),
                        train_docs(), config_.train, [&](const EpochRecord& r) {
                          char line[160];
                          std::snprintf(line, sizeof(line),
                                        "[train] epoch %zu loss=%.5f "
                                        "val_acc=%.4f%s",
                                        r.epoch, r.train_loss, r.val_acc,
                                        r.best ? " *" : "");
                          Log(line);
                        });
    benchmark_ = std::move(result.model);
    WriteArtifact("benchmark.log", [&](std::ostream& out) {
      WriteTrainingLog(out, result.log);
    });
    WriteArtifact("benchmark.ckpt",
                  [&](std::ostream& out) { WriteCheckpoint(out, *benchmark_); });
    ++counters_.train;
    UpdateManifest();
  });
}

const Model& Pipeline::benchmark() {
  if (!benchmark_) TrainBenchmark();
  return *benchmark_;
}

// ------------------------------------------------------------------- score

std::string Pipeline::ScorerTag() const {
  return std::string(ScorerName(config_.scorer));
}

void Pipeline::Score() {
  RunStage("score", [&] {
    const std::string name = "scores." + ScorerTag() + ".tsv";
    if (fs::exists(ArtifactPath(name)) && !force_) {
      std::ifstream in(ArtifactPath(name), std::ios::binary);
      scores_ = ReadScoreFile(in);
      if (scores_->scorer() != config_.scorer ||
          scores_->num_keywords() != dictionary().size()) {
        throw std::runtime_error(name + " does not match the dictionary");
      }
      return;
    }
    std::vector<EncodedDocument> docs;
    if (config_.score_split == ScoreSplit::kTrain) {
      docs.assign(train_docs().begin(), train_docs().end());
    } else {
      const auto split = StratifiedSplit(train_docs(), config_.train.val_fraction,
                                         config_.seed);
      for (std::size_t i : split.validation) docs.push_back(train_docs()[i]);
    }
    Corpus corpus(dictionary(), std::move(docs));
    if (config_.scorer != Scorer::kTfidf) benchmark();
    Log("[score] " + ScorerTag() + " over " + std::to_string(corpus.size()) +
        " documents");
    ScoringOptions options;
    options.threads = config_.threads;
    switch (config_.scorer) {
      case Scorer::kCpe:
        scores_ = CpeScores(benchmark(), corpus, options);
        break;
      case Scorer::kTfidf:
        scores_ = TfidfScores(corpus);
        break;
      case Scorer::kTstat:
        scores_ = TstatScores(benchmark(), corpus, options);
        break;
    }
    WriteArtifact(name, [&](std::ostream& out) {
      WriteScoreFile(out, *scores_, dictionary());
    });
    ++counters_.score;
    UpdateManifest();
  });
}

const ScoreTable& Pipeline::scores() {
  if (!scores_) Score();
  return *scores_;
}

// ------------------------------------------------------------------ screen

std::string Pipeline::SelectionStem(const Selection& selection) const {
  return ScorerTag() + "." + selection.Tag();
}

std::vector<KeywordId> Pipeline::Screen(const Selection& selection) {
  return RunStage("screen", [&] { return ReducedFor(selection).kept; });
}

const Pipeline::Reduced& Pipeline::ReducedFor(const Selection& selection) {
  const std::string stem = SelectionStem(selection);
  if (auto it = reduced_.find(stem); it != reduced_.end()) return it->second;
  const std::string name = "screened." + stem + ".dict";
  const Dictionary& full = dictionary();
  Reduced reduced;
  if (fs::exists(ArtifactPath(name)) && !force_) {
    reduced.dictionary = Dictionary::Load(ArtifactPath(name));
    reduced.kept.push_back(Dictionary::kPadId);
    for (std::size_t j = 1; j < reduced.dictionary.num_ids(); ++j) {
      auto id = full.Find(reduced.dictionary.keyword(static_cast<KeywordId>(j)));
      if (!id) {
        throw std::runtime_error(name + " holds a keyword missing from " +
                                 "dictionary.txt");
      }
      reduced.kept.push_back(*id);
    }
    if (!std::is_sorted(reduced.kept.begin(), reduced.kept.end())) {
      throw std::runtime_error(name + " is not in dictionary order");
    }
  } else {
    reduced.kept = selection.top_k ? SelectTopK(scores(), *selection.top_k)
                                   : SelectByThreshold(scores(),
                                                       *selection.threshold);
    std::vector<std::string> keywords;
    for (std::size_t j = 1; j < reduced.kept.size(); ++j) {
      keywords.push_back(full.keyword(reduced.kept[j]));
    }
    reduced.dictionary = Dictionary::FromKeywords(std::move(keywords));
    WriteArtifact(name,
                  [&](std::ostream& out) { reduced.dictionary.Write(out); });
    ++counters_.screen;
    Log("[screen] " + stem + ": kept " +
        std::to_string(reduced.dictionary.size()) + " of " +
        std::to_string(full.size()) + " keywords");
    UpdateManifest();
  }
  reduced.old_to_new.assign(full.num_ids(), Dictionary::kPadId);
  for (std::size_t j = 0; j < reduced.kept.size(); ++j) {
    reduced.old_to_new[reduced.kept[j]] = static_cast<KeywordId>(j);
  }
  return reduced_.emplace(stem, std::move(reduced)).first->second;
}

std::vector<EncodedDocument> Pipeline::ReduceDocs(
    std::span<const EncodedDocument> docs, const Reduced& reduced) const {
  std::vector<EncodedDocument> out;
  out.reserve(docs.size());
  const std::size_t length = config_.model.sequence_length;
  for (const auto& doc : docs) {
    out.push_back(
        RemapIds(ReencodeScreened(doc, reduced.kept, length), reduced.old_to_new));
  }
  return out;
}

// ----------------------------------------------------------------- retrain

void Pipeline::Retrain(const Selection& selection) {
  RunStage("retrain", [&] { ReducedModel(selection); });
}

const Model& Pipeline::ReducedModel(const Selection& selection) {
  const std::string stem = SelectionStem(selection);
  if (auto it = reduced_models_.find(stem); it != reduced_models_.end()) {
    return it->second;
  }
  const Reduced& reduced = RunStage("screen", [&]() -> const Reduced& {
    return ReducedFor(selection);
  });
  return RunStage("retrain", [&]() -> const Model& {
    ModelConfig model_config = benchmark_config();
    model_config.dictionary_size = reduced.dictionary.size();
    if (model_config.dictionary_size == 0) {
      throw std::runtime_error("screened dictionary " + stem +
                               " keeps no keywords");
    }
    const std::string ckpt = "reduced." + stem + ".ckpt";
    if (fs::exists(ArtifactPath(ckpt)) && !force_) {
      Model model = LoadCheckpoint(ArtifactPath(ckpt));
      if (!(model.config() == model_config)) {
        throw std::runtime_error(ckpt + " does not match the screened config");
      }
      return reduced_models_.emplace(stem, std::move(model)).first->second;
    }
    const auto docs = ReduceDocs(train_docs(), reduced);
    Log("[retrain] " + stem + " " + model_config.Describe());
    auto result = Train(Model::Initialized(model_config, config_.seed), docs,
                        config_.train);
    WriteArtifact("reduced." + stem + ".log", [&](std::ostream& out) {
      WriteTrainingLog(out, result.log);
    });
    WriteArtifact(ckpt,
                  [&](std::ostream& out) { WriteCheckpoint(out, result.model); });
    ++counters_.retrain;
    UpdateManifest();
    return reduced_models_.emplace(stem, std::move(result.model)).first->second;
  });
}

// ------------------------------------------------------------------ report

CompressionReport Pipeline::Report(const Selection& selection) {
  const std::string stem = SelectionStem(selection);
  const Model& reduced_model = ReducedModel(selection);
  const Model& bench = RunStage("train", [&]() -> const Model& {
    return benchmark();
  });
  return RunStage("report", [&] {
    const std::string tsv = "report." + stem + ".tsv";
    if (fs::exists(ArtifactPath(tsv)) && !force_) {
      std::ifstream in(ArtifactPath(tsv), std::ios::binary);
      auto rows = ReadReportTsv(in);
      if (rows.size() != 1) throw std::runtime_error(tsv + " must hold one row");
      return rows.front();
    }
    const Reduced& reduced = reduced_.at(stem);
    const auto test = test_docs();
    const auto reduced_test = ReduceDocs(test, reduced);
    std::uint64_t digest = 0xcbf29ce484222325ULL;
    for (const auto& doc : test) {
      const std::string label = std::to_string(doc.label()) + ",";
      digest = Fnv1a64(label, digest);
    }
    const auto trr_docs =
        config_.trr_split == TrrSplit::kTrain ? train_docs() : test;
    const auto reduced_trr_docs = ReduceDocs(trr_docs, reduced);

    RunSummary bench_run{bench.config(), EvaluateAccuracy(bench, test),
                         test.size(), digest, MeanTrueLength(trr_docs)};
    RunSummary reduced_run{reduced_model.config(),
                           EvaluateAccuracy(reduced_model, reduced_test),
                           reduced_test.size(), digest,
                           MeanTrueLength(reduced_trr_docs)};
    const std::size_t kept = reduced.dictionary.size();
    CompressionReport report = BuildReport(config_.dataset_name, ScorerTag(),
                                           kept, bench_run, reduced_run);
    WriteArtifact(tsv, [&](std::ostream& out) { WriteReportTsv(out, {report}); });
    WriteArtifact("report." + stem + ".txt",
                  [&](std::ostream& out) { WriteReportTable(out, {report}); });
    ++counters_.report;
    Log("[report] " + stem + ": benchmark_acc=" +
        FormatPercent(report.benchmark_acc) +
        " reduced_acc=" + FormatPercent(report.reduced_acc) +
        " prr=" + FormatPercent(report.prr) + " drr=" +
        FormatPercent(report.drr) + " trr=" + FormatPercent(report.trr));
    UpdateManifest();
    return report;
  });
}

CompressionReport Pipeline::RunAll() {
  RunStage("config", [&] { config_.Validate(); });
  return Report(Selection::FromConfig(config_));
}

std::vector<CompressionReport> Pipeline::Sweep(
    const std::vector<std::size_t>& ks) {
  RunStage("sweep", [&] {
    if (ks.empty()) throw std::invalid_argument("no K values to sweep");
  });
  std::vector<CompressionReport> reports;
  for (std::size_t k : ks) reports.push_back(Report(Selection::TopK(k)));
  RunStage("report", [&] {
    WriteArtifact("sweep." + ScorerTag() + ".tsv",
                  [&](std::ostream& out) { WriteReportTsv(out, reports); });
    WriteArtifact("sweep." + ScorerTag() + ".txt",
                  [&](std::ostream& out) { WriteReportTable(out, reports); });
    UpdateManifest();
  });
  return reports;
}

}  // namespace dscreen
