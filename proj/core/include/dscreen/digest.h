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

#ifndef DSCREEN_DIGEST_H_
#define DSCREEN_DIGEST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace dscreen {

// 64-bit FNV-1a.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

std::uint64_t DigestFile(const std::filesystem::path& path);

// 16 lowercase hex digits.
std::string HexDigest(std::uint64_t digest);

}  // namespace dscreen

#endif  // DSCREEN_DIGEST_H_
