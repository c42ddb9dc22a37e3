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

#include "dscreen/dictionary.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dscreen {

Dictionary::Dictionary() : entries_{std::string(kPadToken)} {}

Dictionary Dictionary::FromKeywords(std::vector<std::string> keywords) {
  Dictionary dict;
  dict.entries_.reserve(keywords.size() + 1);
  dict.index_.reserve(keywords.size());
  for (auto& keyword : keywords) {
    if (keyword.empty()) {
      throw std::invalid_argument("dictionary keyword must be non-empty");
    }
    if (keyword == kPadToken) {
      throw std::invalid_argument("dictionary keyword may not be <pad>");
    }
    auto id = static_cast<KeywordId>(dict.entries_.size());
    if (!dict.index_.emplace(keyword, id).second) {
      throw std::invalid_argument("duplicate dictionary keyword: " + keyword);
    }
    dict.entries_.push_back(std::move(keyword));
  }
  return dict;
}

Dictionary Dictionary::Build(
    const std::vector<std::vector<std::string>>& streams,
    std::size_t min_count, std::optional<std::size_t> max_size) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");

  struct Stat {
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string_view, Stat> stats;
  std::vector<std::string_view> order;
  for (const auto& stream : streams) {
    for (const auto& token : stream) {
      if (token.empty() || token == kPadToken) continue;
      auto [it, inserted] = stats.try_emplace(token);
      if (inserted) {
        it->second.first_seen = order.size();
        order.push_back(token);
      }
      ++it->second.count;
    }
  }

  std::vector<std::string_view> kept;
  for (auto token : order) {
    if (stats[token].count >= min_count) kept.push_back(token);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [&](std::string_view a, std::string_view b) {
                     return stats[a].count > stats[b].count;
                   });
  if (max_size && kept.size() > *max_size) kept.resize(*max_size);

  std::vector<std::string> keywords(kept.begin(), kept.end());
  return FromKeywords(std::move(keywords));
}

const std::string& Dictionary::keyword(KeywordId id) const {
  if (id >= entries_.size()) {
    throw std::out_of_range("keyword id " + std::to_string(id) +
                            " outside dictionary of " +
                            std::to_string(entries_.size()) + " ids");
  }
  return entries_[id];
}

std::optional<KeywordId> Dictionary::Find(std::string_view keyword) const {
  auto it = index_.find(keyword);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

KeywordId Dictionary::Lookup(std::string_view keyword) const {
  return Find(keyword).value_or(kPadId);
}

void Dictionary::Write(std::ostream& out) const {
  for (const auto& entry : entries_) out << entry << '\n';
}

Dictionary Dictionary::Read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kPadToken) {
    throw std::runtime_error("dictionary file must start with <pad>");
  }
  std::vector<std::string> keywords;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    keywords.push_back(line);
  }
  return FromKeywords(std::move(keywords));
}

void Dictionary::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  Write(out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Dictionary Dictionary::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return Read(in);
}

}  // namespace dscreen
