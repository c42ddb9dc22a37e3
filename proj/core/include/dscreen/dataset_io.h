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

#ifndef DSCREEN_DATASET_IO_H_
#define DSCREEN_DATASET_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dscreen/corpus.h"

namespace dscreen {

struct RawDocument {
  ClassId label = 0;
  std::string text;
};

// CSV with columns (class_index, title, description), the layout of the
// public AG's News and DBPedia releases. Fields may be double-quoted with ""
// escapes and embedded newlines. Title and description are joined with one
// space. class_index is 1-based.
std::vector<RawDocument> ReadCsvDataset(std::istream& in);
std::vector<RawDocument> ReadCsvDataset(const std::filesystem::path& path);

// Writes one row per document; the text is split into a short title (first
// `title_words` space-separated words) and the remaining description.
void WriteCsvDataset(std::ostream& out, const std::vector<RawDocument>& docs,
                     std::size_t title_words = 4);

enum class TokenizerKind { kWhitespace, kPretokenized };

struct TokenizerOptions {
  TokenizerKind kind = TokenizerKind::kWhitespace;
  char separator = ' ';
};

std::vector<std::vector<std::string>> TokenizeDocuments(
    const std::vector<RawDocument>& docs, const TokenizerOptions& options);

}  // namespace dscreen

#endif  // DSCREEN_DATASET_IO_H_
