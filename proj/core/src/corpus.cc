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

#include "dscreen/corpus.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dscreen {

EncodedDocument::EncodedDocument(std::vector<KeywordId> ids, ClassId label)
    : ids_(std::move(ids)), label_(label) {
  true_length_ = static_cast<std::size_t>(std::count_if(
      ids_.begin(), ids_.end(),
      [](KeywordId id) { return id != Dictionary::kPadId; }));
}

bool EncodedDocument::Contains(KeywordId id) const {
  return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

EncodedDocument Encode(std::span<const std::string> tokens,
                       const Dictionary& dict, std::size_t length,
                       ClassId label) {
  if (length < 1) throw std::invalid_argument("sequence length must be >= 1");
  std::vector<KeywordId> ids(length, Dictionary::kPadId);
  std::size_t n = std::min(length, tokens.size());
  for (std::size_t t = 0; t < n; ++t) ids[t] = dict.Lookup(tokens[t]);
  return EncodedDocument(std::move(ids), label);
}

EncodedDocument Ablate(const EncodedDocument& doc, KeywordId id) {
  if (id == Dictionary::kPadId) {
    throw std::invalid_argument("cannot ablate the pad token (id 0)");
  }
  std::vector<KeywordId> ids(doc.ids().begin(), doc.ids().end());
  std::replace(ids.begin(), ids.end(), id, Dictionary::kPadId);
  return EncodedDocument(std::move(ids), doc.label());
}

EncodedDocument ReencodeScreened(const EncodedDocument& doc,
                                 std::span<const KeywordId> kept,
                                 std::size_t length) {
  if (!std::binary_search(kept.begin(), kept.end(), Dictionary::kPadId)) {
    throw std::invalid_argument("screened id set must contain w0");
  }
  std::vector<KeywordId> ids;
  ids.reserve(length);
  for (KeywordId id : doc.ids()) {
    if (ids.size() == length) break;
    if (id != Dictionary::kPadId &&
        std::binary_search(kept.begin(), kept.end(), id)) {
      ids.push_back(id);
    }
  }
  ids.resize(length, Dictionary::kPadId);
  return EncodedDocument(std::move(ids), doc.label());
}

EncodedDocument RemapIds(const EncodedDocument& doc,
                         std::span<const KeywordId> old_to_new) {
  std::vector<KeywordId> ids;
  ids.reserve(doc.length());
  for (KeywordId id : doc.ids()) {
    if (id >= old_to_new.size()) {
      throw std::out_of_range("id " + std::to_string(id) +
                              " outside remapping table");
    }
    ids.push_back(old_to_new[id]);
  }
  return EncodedDocument(std::move(ids), doc.label());
}

double MeanTrueLength(std::span<const EncodedDocument> docs) {
  if (docs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& doc : docs) total += static_cast<double>(doc.true_length());
  return total / static_cast<double>(docs.size());
}

InvertedIndex::InvertedIndex(std::span<const EncodedDocument> docs,
                             std::size_t num_ids)
    : offsets_(num_ids + 1, 0) {
  // Two passes: count distinct (doc, id) incidences, then fill in doc order
  // so every posting list comes out sorted.
  std::vector<std::uint32_t> last_seen(num_ids, UINT32_MAX);
  auto check = [num_ids](KeywordId id) {
    if (id >= num_ids) {
      throw std::out_of_range("id " + std::to_string(id) +
                              " outside dictionary of " +
                              std::to_string(num_ids) + " ids");
    }
  };
  for (std::uint32_t i = 0; i < docs.size(); ++i) {
    for (KeywordId id : docs[i].ids()) {
      check(id);
      if (id == Dictionary::kPadId || last_seen[id] == i) continue;
      last_seen[id] = i;
      ++offsets_[id + 1];
    }
  }
  for (std::size_t d = 0; d < num_ids; ++d) offsets_[d + 1] += offsets_[d];
  doc_ids_.resize(offsets_[num_ids]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  std::fill(last_seen.begin(), last_seen.end(), UINT32_MAX);
  for (std::uint32_t i = 0; i < docs.size(); ++i) {
    for (KeywordId id : docs[i].ids()) {
      if (id == Dictionary::kPadId || last_seen[id] == i) continue;
      last_seen[id] = i;
      doc_ids_[cursor[id]++] = i;
    }
  }
}

std::span<const std::uint32_t> InvertedIndex::Postings(KeywordId id) const {
  if (id + 1 >= offsets_.size()) return {};
  return std::span<const std::uint32_t>(doc_ids_).subspan(
      offsets_[id], offsets_[id + 1] - offsets_[id]);
}

std::size_t InvertedIndex::num_keywords() const {
  std::size_t n = 0;
  for (std::size_t d = 0; d + 1 < offsets_.size(); ++d) {
    if (offsets_[d + 1] > offsets_[d]) ++n;
  }
  return n;
}

InvertedIndex BuildInvertedIndex(std::span<const EncodedDocument> docs,
                                 std::size_t num_ids) {
  return InvertedIndex(docs, num_ids);
}

Corpus::Corpus(Dictionary dictionary, std::vector<EncodedDocument> docs)
    : dictionary_(std::move(dictionary)), docs_(std::move(docs)) {
  if (!docs_.empty()) sequence_length_ = docs_.front().length();
  for (const auto& doc : docs_) {
    if (doc.length() != sequence_length_) {
      throw std::invalid_argument("corpus documents differ in length");
    }
  }
  index_ = InvertedIndex(docs_, dictionary_.num_ids());
}

void WriteEncodedDocuments(std::ostream& out,
                           std::span<const EncodedDocument> docs,
                           std::size_t length) {
  out << "#DSENC1 T=" << length << " N=" << docs.size() << '\n';
  for (const auto& doc : docs) {
    if (doc.length() != length) {
      throw std::invalid_argument("document length differs from T");
    }
    out << doc.label() << '\t';
    for (std::size_t t = 0; t < doc.length(); ++t) {
      if (t) out << ' ';
      out << doc.ids()[t];
    }
    out << '\n';
  }
}

std::vector<EncodedDocument> ReadEncodedDocuments(std::istream& in) {
  std::string line;
  std::size_t length = 0, count = 0;
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "#DSENC1 T=%zu N=%zu", &length, &count) != 2) {
    throw std::runtime_error("malformed encoded-document header");
  }
  std::vector<EncodedDocument> docs;
  docs.reserve(count);
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    ClassId label = 0;
    fields >> label;
    std::vector<KeywordId> ids;
    ids.reserve(length);
    KeywordId id;
    while (fields >> id) ids.push_back(id);
    if (ids.size() != length) {
      throw std::runtime_error("encoded document " +
                               std::to_string(docs.size()) + " has " +
                               std::to_string(ids.size()) + " ids, expected " +
                               std::to_string(length));
    }
    docs.emplace_back(std::move(ids), label);
  }
  if (docs.size() != count) {
    throw std::runtime_error("encoded-document file truncated");
  }
  return docs;
}

}  // namespace dscreen
