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

#ifndef DSCREEN_PIPELINE_H_
#define DSCREEN_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dscreen/corpus.h"
#include "dscreen/dictionary.h"
#include "dscreen/experiment_config.h"
#include "dscreen/model.h"
#include "dscreen/report.h"
#include "dscreen/screening.h"

namespace dscreen {

// Which keywords survive screening: the top K, or everything at least as
// important as a threshold.
struct Selection {
  std::optional<std::size_t> top_k;
  std::optional<double> threshold;

  static Selection TopK(std::size_t k) { return {k, std::nullopt}; }
  static Selection Threshold(double t) { return {std::nullopt, t}; }
  static Selection FromConfig(const ExperimentConfig& config);

  // File-name fragment, e.g. "k50" or "t0.0001".
  std::string Tag() const;
};

// Number of times each stage actually computed (as opposed to reloading a
// persisted artifact).
struct StageCounters {
  std::size_t ingest = 0;
  std::size_t train = 0;
  std::size_t score = 0;
  std::size_t screen = 0;
  std::size_t retrain = 0;
  std::size_t report = 0;
};

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error("stage '" + stage + "' failed: " + what),
        stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Ingest -> train benchmark -> score -> screen -> retrain -> report, with
// every intermediate persisted in the output directory:
//
//   config.txt, dictionary.txt, train.enc, test.enc
//   benchmark.ckpt, benchmark.log
//   scores.<scorer>.tsv
//   screened.<scorer>.<tag>.dict
//   reduced.<scorer>.<tag>.ckpt, reduced.<scorer>.<tag>.log
//   report.<scorer>.<tag>.tsv, report.<scorer>.<tag>.txt
//   sweep.<scorer>.tsv, sweep.<scorer>.txt
//   manifest.txt
//
// A stage whose artifacts already exist reloads them instead of recomputing
// (unless `force`), and any stage pulls in its prerequisites on demand.
// Files are written under a ".partial" name and renamed when complete; a
// failing stage leaves its ".partial" file behind and throws StageError.
class Pipeline {
 public:
  using Logger = std::function<void(const std::string&)>;

  explicit Pipeline(ExperimentConfig config, bool force = false);

  void set_logger(Logger logger) { logger_ = std::move(logger); }

  void Ingest();
  void TrainBenchmark();
  void Score();
  std::vector<KeywordId> Screen(const Selection& selection);
  void Retrain(const Selection& selection);
  CompressionReport Report(const Selection& selection);

  // The configured selection, end to end.
  CompressionReport RunAll();
  // One report per K; the benchmark and the score table are shared.
  std::vector<CompressionReport> Sweep(const std::vector<std::size_t>& ks);

  const ExperimentConfig& config() const { return config_; }
  const std::filesystem::path& output_dir() const { return config_.output_dir; }
  std::filesystem::path ArtifactPath(std::string_view name) const;
  const StageCounters& counters() const { return counters_; }

  const Dictionary& dictionary();
  std::span<const EncodedDocument> train_docs();
  std::span<const EncodedDocument> test_docs();
  ModelConfig benchmark_config();
  const Model& benchmark();
  const ScoreTable& scores();

 private:
  struct Reduced {
    std::vector<KeywordId> kept;
    Dictionary dictionary;
    std::vector<KeywordId> old_to_new;
  };

  template <typename Fn>
  auto RunStage(const std::string& stage, Fn&& fn) -> decltype(fn());

  void WriteArtifact(std::string_view name,
                     const std::function<void(std::ostream&)>& body);
  void UpdateManifest();
  void Log(const std::string& message) const;

  std::string ScorerTag() const;
  std::string SelectionStem(const Selection& selection) const;
  const Reduced& ReducedFor(const Selection& selection);
  std::vector<EncodedDocument> ReduceDocs(std::span<const EncodedDocument> docs,
                                          const Reduced& reduced) const;
  const Model& ReducedModel(const Selection& selection);

  ExperimentConfig config_;
  bool force_;
  Logger logger_;
  StageCounters counters_;

  std::optional<Dictionary> dictionary_;
  std::optional<std::vector<EncodedDocument>> train_docs_;
  std::optional<std::vector<EncodedDocument>> test_docs_;
  std::optional<Model> benchmark_;
  std::optional<ScoreTable> scores_;
  std::map<std::string, Reduced> reduced_;
  std::map<std::string, Model> reduced_models_;
};

}  // namespace dscreen

#endif  // DSCREEN_PIPELINE_H_
