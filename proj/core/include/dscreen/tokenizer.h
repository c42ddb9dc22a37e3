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

#ifndef DSCREEN_TOKENIZER_H_
#define DSCREEN_TOKENIZER_H_

#include <string>
#include <string_view>
#include <vector>

namespace dscreen {

// Lowercases ASCII letters, splits on whitespace and strips leading and
// trailing ASCII punctuation from each piece. Pieces that become empty are
// dropped. Non-ASCII bytes pass through untouched.
std::vector<std::string> Tokenize(std::string_view text);

// Pre-tokenized ingestion path for languages without space delimiters: the
// text is split on `separator` verbatim (no case folding, no stripping).
// Empty pieces and the literal pad token are dropped.
std::vector<std::string> SplitPretokenized(std::string_view text,
                                           char separator);

}  // namespace dscreen

#endif  // DSCREEN_TOKENIZER_H_
