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

#ifndef DSCREEN_CORPUS_H_
#define DSCREEN_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dscreen/dictionary.h"

namespace dscreen {

// Class labels are 1-based, matching the CSV release layout.
using ClassId = std::uint32_t;

// Fixed-length id sequence. `true_length` counts the non-w0 positions.
class EncodedDocument {
 public:
  EncodedDocument() = default;
  EncodedDocument(std::vector<KeywordId> ids, ClassId label);

  std::span<const KeywordId> ids() const { return ids_; }
  std::size_t length() const { return ids_.size(); }
  std::size_t true_length() const { return true_length_; }
  ClassId label() const { return label_; }

  bool Contains(KeywordId id) const;

  friend bool operator==(const EncodedDocument&,
                         const EncodedDocument&) = default;

 private:
  std::vector<KeywordId> ids_;
  std::size_t true_length_ = 0;
  ClassId label_ = 0;
};

// Maps the first `length` tokens to ids (head truncation); out-of-dictionary
// tokens become w0 and short documents are right-padded with w0.
EncodedDocument Encode(std::span<const std::string> tokens,
                       const Dictionary& dict, std::size_t length,
                       ClassId label = 1);

// Copy of `doc` with every occurrence of `id` replaced by w0. Throws
// std::invalid_argument for id 0.
EncodedDocument Ablate(const EncodedDocument& doc, KeywordId id);

// Drops ids not in `kept` (sorted ascending, must contain w0), compacts the
// survivors to the left in their original order and pads with w0 to `length`.
EncodedDocument ReencodeScreened(const EncodedDocument& doc,
                                 std::span<const KeywordId> kept,
                                 std::size_t length);

// Rewrites ids through `old_to_new`; ids mapping to w0 are kept in place.
EncodedDocument RemapIds(const EncodedDocument& doc,
                         std::span<const KeywordId> old_to_new);

double MeanTrueLength(std::span<const EncodedDocument> docs);

// Keyword id -> strictly increasing document indices containing it. w0 has
// no postings.
class InvertedIndex {
 public:
  InvertedIndex() = default;
  InvertedIndex(std::span<const EncodedDocument> docs, std::size_t num_ids);

  std::span<const std::uint32_t> Postings(KeywordId id) const;
  std::size_t DocumentFrequency(KeywordId id) const {
    return Postings(id).size();
  }
  // Number of ids with at least one posting.
  std::size_t num_keywords() const;
  std::size_t total_postings() const { return doc_ids_.size(); }

 private:
  // CSR layout: postings of id d live in doc_ids_[offsets_[d], offsets_[d+1]).
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> doc_ids_;
};

InvertedIndex BuildInvertedIndex(std::span<const EncodedDocument> docs,
                                 std::size_t num_ids);

// Encoded documents over one dictionary, with their inverted index.
class Corpus {
 public:
  Corpus(Dictionary dictionary, std::vector<EncodedDocument> docs);

  const Dictionary& dictionary() const { return dictionary_; }
  std::span<const EncodedDocument> docs() const { return docs_; }
  const EncodedDocument& doc(std::size_t i) const { return docs_.at(i); }
  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const InvertedIndex& index() const { return index_; }
  std::size_t sequence_length() const { return sequence_length_; }

 private:
  Dictionary dictionary_;
  std::vector<EncodedDocument> docs_;
  InvertedIndex index_;
  std::size_t sequence_length_ = 0;
};

// Encoded-document file: header "#DSENC1 T=<T> N=<N>", then one line per
// document: label, a tab, and T space-separated ids.
void WriteEncodedDocuments(std::ostream& out,
                           std::span<const EncodedDocument> docs,
                           std::size_t length);
std::vector<EncodedDocument> ReadEncodedDocuments(std::istream& in);

}  // namespace dscreen

#endif  // DSCREEN_CORPUS_H_
