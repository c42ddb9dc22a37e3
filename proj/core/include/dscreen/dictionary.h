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

#ifndef DSCREEN_DICTIONARY_H_
#define DSCREEN_DICTIONARY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dscreen {

using KeywordId = std::uint32_t;

// Bidirectional keyword <-> id map. Id 0 is the reserved empty-space token
// (w0), rendered as "<pad>" in dictionary files. Ids are dense: a dictionary
// holding D keywords uses ids 0..D.
class Dictionary {
 public:
  static constexpr KeywordId kPadId = 0;
  static constexpr std::string_view kPadToken = "<pad>";

  // Dictionary holding only w0.
  Dictionary();

  // `keywords` excludes w0; they receive ids 1..size() in order. Throws
  // std::invalid_argument on empty, duplicate or reserved entries.
  static Dictionary FromKeywords(std::vector<std::string> keywords);

  // Keeps tokens with corpus frequency >= min_count, most frequent first,
  // ties broken by first occurrence, truncated to `max_size` keywords.
  static Dictionary Build(const std::vector<std::vector<std::string>>& streams,
                          std::size_t min_count,
                          std::optional<std::size_t> max_size = std::nullopt);

  // Number of keywords D, excluding w0.
  std::size_t size() const { return entries_.size() - 1; }
  // Number of ids including w0 (D + 1).
  std::size_t num_ids() const { return entries_.size(); }

  const std::string& keyword(KeywordId id) const;
  std::optional<KeywordId> Find(std::string_view keyword) const;
  // Out-of-dictionary keywords map to w0.
  KeywordId Lookup(std::string_view keyword) const;

  const std::vector<std::string>& entries() const { return entries_; }

  // Dictionary file: line i holds the keyword with id i; line 0 is "<pad>".
  void Write(std::ostream& out) const;
  static Dictionary Read(std::istream& in);
  void Save(const std::filesystem::path& path) const;
  static Dictionary Load(const std::filesystem::path& path);

  friend bool operator==(const Dictionary& a, const Dictionary& b) {
    return a.entries_ == b.entries_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> entries_;
  std::unordered_map<std::string, KeywordId, Hash, std::equal_to<>> index_;
};

}  // namespace dscreen

#endif  // DSCREEN_DICTIONARY_H_
