//
// Copyright 2026 The Fewshot Adapt Authors
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
//

#ifndef FEWSHOT_HASH_H_
#define FEWSHOT_HASH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace fewshot {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;

// 64-bit FNV-1a, continuing from `basis`.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = kFnvOffsetBasis);

// Advances `state` and returns the next splitmix64 output.
std::uint64_t SplitMix64(std::uint64_t& state);

// Deterministically combines two 64-bit values into a new seed.
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b);

// Lowercase hex SHA-256 digests.
std::string Sha256Hex(std::string_view bytes);
std::string Sha256File(const std::filesystem::path& path);

}  // namespace fewshot

#endif  // FEWSHOT_HASH_H_
