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


#ifndef DSCREEN_TESTS_TESTING_FIXTURES_H_
#define DSCREEN_TESTS_TESTING_FIXTURES_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dscreen/corpus.h"
#include "dscreen/model.h"

namespace dscreen::testing {

// Random corpus with 1..max_docs documents over 1..max_keywords keywords.
// Documents have a random number of trailing pads; some keywords may never
// occur.
inline Corpus RandomCorpus(std::mt19937_64& rng, std::size_t max_docs,
                           std::size_t max_keywords, std::size_t length,
                           std::size_t num_classes) {
  const std::size_t num_docs = 1 + rng() % max_docs;
  const std::size_t num_keywords = 1 + rng() % max_keywords;
  std::vector<std::string> keywords;
  for (std::size_t i = 0; i < num_keywords; ++i) {
    keywords.push_back("k" + std::to_string(i));
  }
  std::vector<EncodedDocument> docs;
  for (std::size_t i = 0; i < num_docs; ++i) {
    std::vector<KeywordId> ids(length, 0);
    const std::size_t used = rng() % (length + 1);
    for (std::size_t t = 0; t < used; ++t) {
      ids[t] = static_cast<KeywordId>(1 + rng() % num_keywords);
    }
    docs.emplace_back(ids, static_cast<ClassId>(1 + rng() % num_classes));
  }
  return Corpus(Dictionary::FromKeywords(keywords), std::move(docs));
}

inline ModelConfig SmallConfig(ModelKind kind, std::size_t num_keywords,
                               std::size_t length, std::size_t num_classes) {
  ModelConfig c;
  c.kind = kind;
  c.dictionary_size = num_keywords;
  c.embedding_dim = 4;
  c.hidden_dim = 3;
  c.num_classes = num_classes;
  c.sequence_length = length;
  c.kernel_sizes = {2, 3};
  c.filters_per_kernel = 3;
  return c;
}

// Seeded model whose non-frozen parameters are redrawn from U(-scale, scale)
// so that predictions depend visibly on the input.
inline Model RandomModel(const ModelConfig& config, std::uint64_t seed,
                         double scale = 1.0) {
  auto model = Model::Initialized(config, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& p : model.params()) {
    const std::size_t begin = p.frozen_rows * (p.value.size() / p.value.dim(0));
    for (std::size_t i = begin; i < p.value.size(); ++i) {
      p.value[i] = static_cast<float>(u(rng));
    }
  }
  return model;
}

}  // namespace dscreen::testing

#endif  // DSCREEN_TESTS_TESTING_FIXTURES_H_
