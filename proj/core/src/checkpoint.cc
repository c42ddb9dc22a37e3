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

#include "dscreen/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dscreen {
namespace {

constexpr std::string_view kMagic = "DSCKPT1";

std::uint32_t ToLittleEndian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) |
           ((v >> 8) & 0xff00u) | (v >> 24);
  }
}

struct Record {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<float> values;
};

}  // namespace

void WriteCheckpoint(std::ostream& out, const Model& model) {
  const auto& c = model.config();
  out << kMagic << ' ' << ModelKindName(c.kind) << ' ' << c.dictionary_size
      << ' ' << c.embedding_dim << ' '
      << (c.kind == ModelKind::kSimpleRnn ? c.hidden_dim : 0) << ' '
      << c.num_classes << ' ' << c.sequence_length << '\n';
  std::vector<char> bytes;
  for (const auto& p : model.params()) {
    out << p.name;
    for (std::size_t extent : p.value.shape()) out << ' ' << extent;
    out << '\n';
    auto values = p.value.data();
    bytes.resize(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::uint32_t word = ToLittleEndian(std::bit_cast<std::uint32_t>(values[i]));
      std::memcpy(&bytes[i * 4], &word, 4);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
}

Model ReadCheckpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty checkpoint");
  std::istringstream header(line);
  std::string magic, kind;
  ModelConfig config;
  std::size_t d2 = 0;
  header >> magic >> kind >> config.dictionary_size >> config.embedding_dim >>
      d2 >> config.num_classes >> config.sequence_length;
  if (!header || magic != kMagic) {
    throw std::runtime_error("not a DSCKPT1 checkpoint");
  }
  config.kind = ParseModelKind(kind);
  if (config.kind == ModelKind::kSimpleRnn) config.hidden_dim = d2;

  std::vector<Record> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    Record record;
    fields >> record.name;
    std::size_t extent;
    while (fields >> extent) record.shape.push_back(extent);
    std::size_t count = 1;
    for (std::size_t e : record.shape) count *= e;
    if (record.shape.empty() || count == 0) {
      throw std::runtime_error("bad shape for checkpoint record " +
                               record.name);
    }
    std::vector<char> bytes(count * 4);
    if (!in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
      throw std::runtime_error("truncated checkpoint record " + record.name);
    }
    record.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t word;
      std::memcpy(&word, &bytes[i * 4], 4);
      record.values[i] = std::bit_cast<float>(ToLittleEndian(word));
    }
    records.push_back(std::move(record));
  }

  if (config.kind == ModelKind::kTextCnn) {
    config.kernel_sizes.clear();
    for (const auto& r : records) {
      if (r.name.starts_with("conv") && r.name.ends_with(".weight")) {
        if (r.shape.size() != 3) {
          throw std::runtime_error("conv weight " + r.name + " is not rank 3");
        }
        config.kernel_sizes.push_back(r.shape[0]);
        config.filters_per_kernel = r.shape[2];
      }
    }
  }

  Model model(config);
  auto& params = model.params();
  if (records.size() != params.size()) {
    throw std::runtime_error("checkpoint has " +
                             std::to_string(records.size()) +
                             " parameters, model expects " +
                             std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (records[i].name != params[i].name ||
        records[i].shape != params[i].value.shape()) {
      throw std::runtime_error("checkpoint record " + records[i].name +
                               " does not match model parameter " +
                               params[i].name);
    }
    std::copy(records[i].values.begin(), records[i].values.end(),
              params[i].value.data().begin());
  }
  return model;
}

void SaveCheckpoint(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  WriteCheckpoint(out, model);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Model LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return ReadCheckpoint(in);
}

}  // namespace dscreen
