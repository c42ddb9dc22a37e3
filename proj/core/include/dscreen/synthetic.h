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

#ifndef DSCREEN_SYNTHETIC_H_
#define DSCREEN_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dscreen/dataset_io.h"

namespace dscreen {

// Planted-keyword corpus: every class owns a disjoint set of planted
// keywords; the rest of the vocabulary is shared noise. Each token is a
// noise keyword with probability `noise_rate`, otherwise a uniformly chosen
// planted keyword of the document's class.
struct SyntheticSpec {
  std::size_t num_classes = 2;
  std::size_t docs_per_class = 1000;
  std::size_t test_docs_per_class = 200;
  std::size_t vocab_size = 500;
  std::size_t planted_per_class = 10;
  std::size_t doc_length = 30;
  double noise_rate = 0.5;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct SyntheticDataset {
  std::vector<RawDocument> train;
  std::vector<RawDocument> test;
  // planted[k - 1] holds the keywords planted for class k.
  std::vector<std::vector<std::string>> planted;
  std::vector<std::string> noise;
};

SyntheticDataset MakeSynthetic(const SyntheticSpec& spec);

// Writes train.csv, test.csv and planted.tsv ("class <TAB> keyword").
void WriteSynthetic(const SyntheticDataset& dataset,
                    const std::filesystem::path& dir);

}  // namespace dscreen

#endif  // DSCREEN_SYNTHETIC_H_
