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

#include "dscreen/synthetic.h"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "dscreen/layers.h"

namespace dscreen {

void SyntheticSpec::Validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("infeasible synthetic spec: " + what);
  };
  if (num_classes < 2) fail("need at least 2 classes");
  if (docs_per_class < 1) fail("need at least one document per class");
  if (doc_length < 1) fail("document length must be >= 1");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
    fail("noise rate must be in [0, 1]");
  }
  if (planted_per_class * num_classes >= vocab_size) {
    fail("planted keywords per class x classes must be < vocab size");
  }
  if (planted_per_class == 0 && noise_rate < 1.0) {
    fail("noise rate below 1 needs planted keywords");
  }
}

SyntheticDataset MakeSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  const int digits = static_cast<int>(std::to_string(spec.vocab_size).size());
  std::vector<std::string> vocab;
  vocab.reserve(spec.vocab_size);
  for (std::size_t v = 0; v < spec.vocab_size; ++v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "w%0*zu", digits, v);
    vocab.emplace_back(buffer);
  }
  for (std::size_t i = vocab.size(); i > 1; --i) {
    std::swap(vocab[i - 1], vocab[UniformIndex(rng, i)]);
  }

  SyntheticDataset out;
  out.planted.resize(spec.num_classes);
  std::size_t next = 0;
  for (auto& words : out.planted) {
    words.assign(vocab.begin() + next,
                 vocab.begin() + next + spec.planted_per_class);
    next += spec.planted_per_class;
  }
  out.noise.assign(vocab.begin() + next, vocab.end());

  auto make_docs = [&](std::size_t per_class) {
    std::vector<RawDocument> docs;
    docs.reserve(per_class * spec.num_classes);
    for (std::size_t i = 0; i < per_class; ++i) {
      for (std::size_t c = 0; c < spec.num_classes; ++c) {
        RawDocument doc;
        doc.label = static_cast<ClassId>(c + 1);
        for (std::size_t t = 0; t < spec.doc_length; ++t) {
          const bool noisy = UniformUnit(rng) < spec.noise_rate;
          const auto& pool = noisy ? out.noise : out.planted[c];
          if (t) doc.text.push_back(' ');
          doc.text += pool[UniformIndex(rng, pool.size())];
        }
        docs.push_back(std::move(doc));
      }
    }
    return docs;
  };
  out.train = make_docs(spec.docs_per_class);
  out.test = make_docs(spec.test_docs_per_class);
  return out;
}

void WriteSynthetic(const SyntheticDataset& dataset,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, auto&& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    body(out);
    if (!out) throw std::runtime_error("failed writing " + (dir / name).string());
  };
  write("train.csv", [&](std::ostream& out) { WriteCsvDataset(out, dataset.train); });
  write("test.csv", [&](std::ostream& out) { WriteCsvDataset(out, dataset.test); });
  write("planted.tsv", [&](std::ostream& out) {
    for (std::size_t c = 0; c < dataset.planted.size(); ++c) {
      for (const auto& word : dataset.planted[c]) {
        out << c + 1 << '\t' << word << '\n';
      }
    }
  });
}

}  // namespace dscreen
