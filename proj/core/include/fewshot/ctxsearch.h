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

// Retrieval of training sentences whose context resembles the context of a
// novel word in a reference sentence.

#ifndef FEWSHOT_CTXSEARCH_H_
#define FEWSHOT_CTXSEARCH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fewshot/corpus.h"
#include "fewshot/embed.h"

namespace fewshot {

struct ContextMatch {
  PairId pair_id = 0;
  std::size_t position = 0;  // index of the sampled target token
  double similarity = 0.0;

  friend bool operator==(const ContextMatch&, const ContextMatch&) = default;
};

enum class CandidateOrigin { kGenuineOnly, kAny };

CandidateOrigin ParseCandidateOrigin(std::string_view name);

struct SearchConfig {
  std::size_t k = 57;
  std::uint64_t seed = 0;
  // Matches below this similarity are dropped; -1 disables the filter.
  double min_similarity = -1.0;
  CandidateOrigin candidate_origin = CandidateOrigin::kGenuineOnly;
  int threads = 1;

  void Validate() const;
};

struct SearchResult {
  // Sorted by similarity descending, then pair id ascending.
  std::vector<ContextMatch> matches;
  // Candidates that passed the origin and self-match filters.
  std::size_t eligible = 0;
  std::size_t provider_calls = 0;
  // Scored candidates whose context vector had zero norm (similarity 0),
  // e.g. one-token sentences under the built-in provider.
  std::size_t zero_norm = 0;
};

// The position sampled in a candidate of `length` tokens. Depends only on
// (seed, id), never on iteration order.
std::size_t SampledPosition(std::uint64_t seed, PairId id, std::size_t length);

// One uniformly sampled position per candidate, scored against the context
// of the reference target at `w_position`; the top k survive. Makes exactly
// one provider call per eligible candidate plus one for the reference.
// Candidates textually equal to the reference are skipped. Asking for more
// than the eligible count returns everything and warns.
SearchResult SearchContexts(const SentencePair& reference,
                            std::size_t w_position,
                            const ParallelCorpus& candidates,
                            const EmbeddingProvider& provider,
                            const SearchConfig& config);

// Scores every position of every candidate and keeps each candidate's best
// (lowest position on ties). `config.seed` is unused.
SearchResult ExhaustiveSearch(const SentencePair& reference,
                              std::size_t w_position,
                              const ParallelCorpus& candidates,
                              const EmbeddingProvider& provider,
                              const SearchConfig& config);

// TSV: pair_id, position, similarity, sampled token, candidate target.
std::string RenderMatchDump(std::span<const ContextMatch> matches,
                            const ParallelCorpus& candidates);

}  // namespace fewshot

#endif  // FEWSHOT_CTXSEARCH_H_
