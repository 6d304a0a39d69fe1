// Copyright 2026 The evofg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVOFG_CHECKPOINT_H_
#define EVOFG_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>

#include "evofg/experts.h"
#include "evofg/router.h"

namespace evofg {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (all integers little-endian):
//   8 bytes   magic "EVOFGCKP"
//   u32       format version
//   u32       header length L
//   L bytes   UTF-8 JSON header
//   per tensor, in header order: u32 rows, u32 cols, rows*cols f64
//   (row-major)
// Throws ParseError on a malformed or truncated file.
void save_expert(const ExpertModel& m, const std::filesystem::path& path);
ExpertModel load_expert(const std::filesystem::path& path);

void save_router(const RouterModel& r, const std::filesystem::path& path);
RouterModel load_router(const std::filesystem::path& path);

// Named tensors without model metadata (e.g. cached key embeddings).
void save_tensors(const ParameterList& tensors, const std::filesystem::path& path);
ParameterList load_tensors(const std::filesystem::path& path);

}  // namespace evofg

#endif  // EVOFG_CHECKPOINT_H_
