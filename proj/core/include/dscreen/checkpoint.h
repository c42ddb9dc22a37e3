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

#ifndef DSCREEN_CHECKPOINT_H_
#define DSCREEN_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>

#include "dscreen/model.h"

namespace dscreen {

// Checkpoint layout:
//   DSCKPT1 <kind> <D> <d1> <d2-or-0> <K> <T>\n
// then for every parameter, in model order:
//   <name> <extent>...\n<raw little-endian float32 buffer>
// TextCNN kernel sizes and filter counts are recovered from the conv
// parameter records.
void WriteCheckpoint(std::ostream& out, const Model& model);
Model ReadCheckpoint(std::istream& in);

void SaveCheckpoint(const std::filesystem::path& path, const Model& model);
Model LoadCheckpoint(const std::filesystem::path& path);

}  // namespace dscreen

#endif  // DSCREEN_CHECKPOINT_H_
