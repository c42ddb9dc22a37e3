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

#ifndef DSCREEN_EXPERIMENT_CONFIG_H_
#define DSCREEN_EXPERIMENT_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "dscreen/dataset_io.h"
#include "dscreen/model.h"
#include "dscreen/screening.h"
#include "dscreen/training.h"

namespace dscreen {

enum class ScoreSplit { kTrain, kValidation };
enum class TrrSplit { kTrain, kTest };

// Flat "key = value" experiment description; '#' starts a comment.
//
//   dataset.name = agnews           dataset.train = train.csv
//   dataset.test = test.csv         dataset.format = csv
//   dataset.tokenizer = whitespace | pretokenized
//   dataset.separator = space | tab | <single character>
//   dictionary.min_count = 1        dictionary.max_size = 50000
//   model.kind = textcnn | simplernn | meanpool
//   model.d1 = 128  model.d2 = 64  model.num_classes = 4 (0 infers)
//   model.sequence_length = 60      model.kernel_sizes = 3,4,5
//   model.filters = 128
//   train.batch_size  train.rho  train.epsilon  train.weight_decay
//   train.dropout  train.max_epochs  train.patience  train.val_fraction
//   scorer = cpe | tfidf | tstat
//   select.top_k = 3000   or   select.threshold = 1e-4
//   score.split = train | validation      trr.split = train | test
//   seed = 1   threads = 1   output_dir = out
//
// Relative paths resolve against the config file's directory.
struct ExperimentConfig {
  std::string dataset_name = "dataset";
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  TokenizerOptions tokenizer;
  std::size_t min_count = 1;
  std::optional<std::size_t> max_dictionary_size;
  // dictionary_size is filled in at ingest time; num_classes 0 means infer
  // from the labels.
  ModelConfig model = [] {
    ModelConfig m;
    m.num_classes = 0;
    return m;
  }();
  // train.seed is overridden by `seed`.
  TrainSpec train;
  Scorer scorer = Scorer::kCpe;
  std::optional<std::size_t> top_k;
  std::optional<double> threshold;
  ScoreSplit score_split = ScoreSplit::kTrain;
  TrrSplit trr_split = TrrSplit::kTrain;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::filesystem::path output_dir = "out";

  static ExperimentConfig Parse(std::istream& in,
                                const std::filesystem::path& base_dir = {});
  static ExperimentConfig Load(const std::filesystem::path& path);

  // Applies one key/value pair; throws on unknown keys or bad values.
  void Set(const std::string& key, const std::string& value,
           const std::filesystem::path& base_dir = {});

  // Exactly one of top_k / threshold; basic ranges.
  void Validate() const;

  // Canonical key = value rendering, parseable by Parse.
  std::string Serialize() const;
};

}  // namespace dscreen

#endif  // DSCREEN_EXPERIMENT_CONFIG_H_
