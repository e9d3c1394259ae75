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

#include "fewshot/embed.h"

#include <algorithm>
#include <cmath>

#include "fewshot/error.h"
#include "fewshot/hash.h"
#include "fewshot/log.h"

namespace fewshot {

ContextVector::ContextVector(std::vector<double> values, std::string space)
    : values_(std::move(values)), space_(std::move(space)) {
  double sum = 0.0;
  for (double x : values_) sum += x * x;
  norm_ = std::sqrt(sum);
}

void ContextQuery::Validate() const {
  if (position >= tokens.size()) {
    throw DataError("context position " + std::to_string(position) +
                    " out of range for a sentence of " +
                    std::to_string(tokens.size()) + " tokens");
  }
}

HashingProvider::HashingProvider(Options options) : options_(options) {
  if (options_.dimension == 0) {
    throw ConfigError("embedding dimension must be positive");
  }
}

std::string HashingProvider::name() const {
  return "builtin-hash/d" + std::to_string(options_.dimension) + "/w" +
         std::to_string(options_.window) + "/s" +
         std::to_string(options_.seed);
}

std::vector<double> HashingProvider::TokenDirection(std::string_view token,
                                                    bool near) const {
  std::string key = near ? "near" : "far";
  key.push_back('\x1f');
  key.append(token);
  std::uint64_t state = Fnv1a64(key) ^ options_.seed;
  std::vector<double> direction(options_.dimension);
  double sum = 0.0;
  for (double& x : direction) {
    const std::uint64_t bits = SplitMix64(state);
    x = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
    sum += x * x;
  }
  const double norm = std::sqrt(sum);
  for (double& x : direction) x /= norm;
  return direction;
}

ContextVector HashingProvider::Embed(const ContextQuery& query) const {
  query.Validate();
  std::vector<double> v(options_.dimension, 0.0);
  const std::size_t i = query.position;
  const std::size_t lo = i >= options_.window ? i - options_.window : 0;
  const std::size_t hi =
      std::min(query.tokens.size() - 1, i + options_.window);
  for (std::size_t j = lo; j <= hi; ++j) {
    if (j == i) continue;
    const std::size_t distance = j > i ? j - i : i - j;
    const double weight = 1.0 / static_cast<double>(distance);
    const std::vector<double> h =
        TokenDirection(query.tokens[j], /*near=*/distance == 1);
    for (std::size_t d = 0; d < v.size(); ++d) v[d] += weight * h[d];
  }
  return ContextVector(std::move(v), name());
}

double Cosine(const ContextVector& a, const ContextVector& b) {
  if (a.dimension() != b.dimension() || a.space() != b.space()) {
    throw DimensionMismatch("cannot compare vectors from '" + a.space() +
                            "' (dim " + std::to_string(a.dimension()) +
                            ") and '" + b.space() + "' (dim " +
                            std::to_string(b.dimension()) + ")");
  }
  if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
  double dot = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t d = 0; d < av.size(); ++d) dot += av[d] * bv[d];
  return std::clamp(dot / (a.norm() * b.norm()), -1.0, 1.0);
}

}  // namespace fewshot
