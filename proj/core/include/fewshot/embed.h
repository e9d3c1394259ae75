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

// Masked contextual embeddings.
//
// A provider maps (sentence, position) to a vector that summarises the
// surrounding tokens without looking at the token at `position` itself.

#ifndef FEWSHOT_EMBED_H_
#define FEWSHOT_EMBED_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fewshot/corpus.h"

namespace fewshot {

class ContextVector {
 public:
  ContextVector() = default;
  // `space` names the provider that produced the vector; vectors from
  // different spaces are never compared.
  ContextVector(std::vector<double> values, std::string space);

  std::span<const double> values() const { return values_; }
  std::size_t dimension() const { return values_.size(); }
  double norm() const { return norm_; }
  const std::string& space() const { return space_; }

 private:
  std::vector<double> values_;
  double norm_ = 0.0;
  std::string space_;
};

struct ContextQuery {
  std::span<const Token> tokens;
  std::size_t position = 0;

  // Throws DataError when position is out of range.
  void Validate() const;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::string name() const = 0;

  // Must be safe to call concurrently. Transport problems surface as
  // TransportError; dimension problems as DimensionMismatch.
  virtual ContextVector Embed(const ContextQuery& query) const = 0;
};

// Deterministic built-in provider. For focus position i:
//
//   v = sum over j != i, |j - i| <= window of (1 / |j - i|) * h(token_j, b)
//
// where b is the "near" bucket for |j - i| == 1 and "far" otherwise, and
// h(token, b) is a unit vector whose components come from a splitmix64
// stream seeded with FNV-1a(b + '\x1f' + token) xor seed, each component
// mapped to [-1, 1) as 2 * (x >> 11) * 2^-53 - 1 before normalisation.
class HashingProvider : public EmbeddingProvider {
 public:
  struct Options {
    std::size_t dimension = 256;
    std::size_t window = 5;
    std::uint64_t seed = 0x5eed;
  };

  HashingProvider() : HashingProvider(Options{}) {}
  explicit HashingProvider(Options options);

  std::size_t dimension() const override { return options_.dimension; }
  std::string name() const override;
  ContextVector Embed(const ContextQuery& query) const override;

  // The unit vector h(token, bucket); exposed for tests.
  std::vector<double> TokenDirection(std::string_view token,
                                     bool near) const;

 private:
  Options options_;
};

// dot(a, b) / (|a| |b|), clamped to [-1, 1]. A zero-norm input yields 0.
// Throws DimensionMismatch when the vectors come from different
// spaces or have different lengths.
double Cosine(const ContextVector& a, const ContextVector& b);

}  // namespace fewshot

#endif  // FEWSHOT_EMBED_H_
