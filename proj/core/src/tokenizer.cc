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

#include "dscreen/tokenizer.h"

#include "dscreen/dictionary.h"

namespace dscreen {
namespace {

bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsAsciiPunct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) ||
         (c >= 91 && c <= 96) || (c >= 123 && c <= 126);
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(text[i])) ++i;
    size_t begin = i;
    while (i < text.size() && !IsAsciiSpace(text[i])) ++i;
    size_t end = i;
    while (begin < end && IsAsciiPunct(text[begin])) ++begin;
    while (end > begin && IsAsciiPunct(text[end - 1])) --end;
    if (begin == end) continue;
    std::string token(text.substr(begin, end - begin));
    for (char& c : token) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> SplitPretokenized(std::string_view text,
                                           char separator) {
  std::vector<std::string> tokens;
  size_t begin = 0;
  while (begin <= text.size()) {
    size_t end = text.find(separator, begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view piece = text.substr(begin, end - begin);
    if (!piece.empty() && piece != Dictionary::kPadToken) {
      tokens.emplace_back(piece);
    }
    begin = end + 1;
  }
  return tokens;
}

}  // namespace dscreen
