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


#ifndef DSCREEN_BENCHMARKS_FIXTURE_H_
#define DSCREEN_BENCHMARKS_FIXTURE_H_

#include "dscreen/corpus.h"
#include "dscreen/dataset_io.h"
#include "dscreen/model.h"
#include "dscreen/synthetic.h"

namespace dscreen::bench {

inline Corpus PlantedCorpus(std::size_t docs_per_class, std::size_t length) {
  SyntheticSpec spec;
  spec.docs_per_class = docs_per_class;
  spec.doc_length = length;
  const auto dataset = MakeSynthetic(spec);
  const auto tokens = TokenizeDocuments(dataset.train, {});
  Dictionary dict = Dictionary::Build(tokens, 1);
  std::vector<EncodedDocument> docs;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    docs.push_back(Encode(tokens[i], dict, length, dataset.train[i].label));
  }
  return Corpus(std::move(dict), std::move(docs));
}

inline ModelConfig BenchConfig(ModelKind kind, std::size_t dictionary_size,
                               std::size_t length) {
  ModelConfig config;
  config.kind = kind;
  config.dictionary_size = dictionary_size;
  config.embedding_dim = 64;
  config.hidden_dim = 64;
  config.num_classes = 2;
  config.sequence_length = length;
  config.kernel_sizes = {3, 4, 5};
  config.filters_per_kernel = 64;
  return config;
}

}  // namespace dscreen::bench

#endif  // DSCREEN_BENCHMARKS_FIXTURE_H_
