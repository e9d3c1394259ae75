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

#ifndef FEWSHOT_RNG_H_
#define FEWSHOT_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fewshot/hash.h"

namespace fewshot {

// Seeded generator with platform-independent bounded draws. The standard
// distributions are implementation-defined, so sampling that must be
// reproducible across toolchains goes through this class.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Seed derived from a base seed and a label (word, approach name, ...).
  static std::uint64_t Derive(std::uint64_t seed, std::string_view label) {
    return MixSeed(seed, Fnv1a64(label));
  }
  static std::uint64_t Derive(std::uint64_t seed, std::uint64_t value) {
    return MixSeed(seed, value);
  }

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t Uniform(std::uint64_t bound);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Uniform(i)]);
    }
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    Shuffle(std::span<T>(items));
  }

  // `count` distinct indices from [0, population), in draw order.
  std::vector<std::size_t> SampleIndices(std::size_t population,
                                         std::size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace fewshot

#endif  // FEWSHOT_RNG_H_
