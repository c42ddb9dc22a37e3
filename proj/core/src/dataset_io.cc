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

#include "dscreen/dataset_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "dscreen/tokenizer.h"

namespace dscreen {
namespace {

// Reads one CSV record. Returns false at end of input.
bool ReadRecord(std::istream& in, std::vector<std::string>& fields,
                std::size_t& line_no) {
  fields.clear();
  int c = in.peek();
  if (c == EOF) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  while (true) {
    c = in.get();
    if (c == EOF) {
      if (quoted) {
        throw std::runtime_error("unterminated quoted field at line " +
                                 std::to_string(line_no));
      }
      break;
    }
    any = true;
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_no;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      ++line_no;
      break;
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (any) fields.push_back(std::move(field));
  return true;
}

std::string QuoteCsv(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::vector<RawDocument> ReadCsvDataset(std::istream& in) {
  std::vector<RawDocument> docs;
  std::vector<std::string> fields;
  std::size_t line_no = 1;
  while (true) {
    std::size_t record_line = line_no;
    if (!ReadRecord(in, fields, line_no)) break;
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (fields.size() != 3) {
      throw std::runtime_error("line " + std::to_string(record_line) +
                               ": expected 3 CSV fields, got " +
                               std::to_string(fields.size()));
    }
    RawDocument doc;
    try {
      std::size_t used = 0;
      long label = std::stol(fields[0], &used);
      if (used != fields[0].size() || label < 1) throw std::invalid_argument("");
      doc.label = static_cast<ClassId>(label);
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(record_line) +
                               ": class_index must be a positive integer, got '" +
                               fields[0] + "'");
    }
    doc.text = fields[1] + " " + fields[2];
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<RawDocument> ReadCsvDataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read dataset " + path.string());
  return ReadCsvDataset(in);
}

void WriteCsvDataset(std::ostream& out, const std::vector<RawDocument>& docs,
                     std::size_t title_words) {
  for (const auto& doc : docs) {
    std::size_t pos = std::string::npos;
    std::size_t start = 0;
    for (std::size_t w = 0; w < title_words; ++w) {
      pos = doc.text.find(' ', start);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    std::string title, description;
    if (pos == std::string::npos) {
      title = doc.text;
    } else {
      title = doc.text.substr(0, pos);
      description = doc.text.substr(pos + 1);
    }
    out << '"' << doc.label << "\"," << QuoteCsv(title) << ','
        << QuoteCsv(description) << '\n';
  }
}

std::vector<std::vector<std::string>> TokenizeDocuments(
    const std::vector<RawDocument>& docs, const TokenizerOptions& options) {
  std::vector<std::vector<std::string>> streams;
  streams.reserve(docs.size());
  for (const auto& doc : docs) {
    streams.push_back(options.kind == TokenizerKind::kWhitespace
                          ? Tokenize(doc.text)
                          : SplitPretokenized(doc.text, options.separator));
  }
  return streams;
}

}  // namespace dscreen
