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

#include "fewshot/ctxsearch.h"

#include <algorithm>
#include <optional>

#include "fewshot/error.h"
#include "fewshot/log.h"
#include "fewshot/parallel.h"
#include "fewshot/rng.h"
#include "fewshot/text_io.h"

namespace fewshot {

CandidateOrigin ParseCandidateOrigin(std::string_view name) {
  if (name == "genuine") return CandidateOrigin::kGenuineOnly;
  if (name == "any") return CandidateOrigin::kAny;
  throw ConfigError("unknown candidate origin '" + std::string(name) +
                    "' (expected genuine or any)");
}

void SearchConfig::Validate() const {
  if (k < 1) throw ConfigError("search k must be >= 1");
}

std::size_t SampledPosition(std::uint64_t seed, PairId id,
                            std::size_t length) {
  Rng rng(Rng::Derive(seed, static_cast<std::uint64_t>(id)));
  return static_cast<std::size_t>(rng.Uniform(length));
}

namespace {

std::vector<const SentencePair*> EligibleCandidates(
    const SentencePair& reference, const ParallelCorpus& candidates,
    CandidateOrigin origin) {
  std::vector<const SentencePair*> eligible;
  eligible.reserve(candidates.size());
  for (const SentencePair& p : candidates.pairs()) {
    if (origin == CandidateOrigin::kGenuineOnly &&
        p.origin != Origin::kGenuine) {
      continue;
    }
    if (p.SameText(reference)) continue;
    eligible.push_back(&p);
  }
  return eligible;
}

bool Ranks(const ContextMatch& a, const ContextMatch& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.pair_id < b.pair_id;
}

SearchResult Rank(std::vector<std::optional<ContextMatch>> scored,
                  std::size_t eligible, std::size_t calls,
                  std::size_t zero_norm, const SearchConfig& config) {
  SearchResult result;
  result.eligible = eligible;
  result.provider_calls = calls;
  result.zero_norm = zero_norm;
  if (zero_norm > 0) {
    Warn(std::to_string(zero_norm) + " of " + std::to_string(eligible) +
         " candidate contexts have a zero-norm vector and score 0");
  }
  for (auto& m : scored) {
    if (m && m->similarity >= config.min_similarity) {
      result.matches.push_back(*m);
    }
  }
  std::sort(result.matches.begin(), result.matches.end(), Ranks);
  if (config.k > result.matches.size()) {
    Warn("context search asked for k=" + std::to_string(config.k) +
         " but only " + std::to_string(result.matches.size()) +
         " candidates are available");
  } else {
    result.matches.resize(config.k);
  }
  return result;
}

ContextVector EmbedReference(const SentencePair& reference,
                             std::size_t w_position,
                             const EmbeddingProvider& provider) {
  if (w_position >= reference.target.size()) {
    throw DataError("reference position " + std::to_string(w_position) +
                    " out of range for pair " + std::to_string(reference.id));
  }
  ContextVector anchor = provider.Embed({reference.target.tokens(), w_position});
  if (anchor.norm() == 0.0) {
    Warn("reference " + std::to_string(reference.id) +
         " has a zero-norm context vector; every candidate scores 0");
  }
  return anchor;
}

}  // namespace

SearchResult SearchContexts(const SentencePair& reference,
                            std::size_t w_position,
                            const ParallelCorpus& candidates,
                            const EmbeddingProvider& provider,
                            const SearchConfig& config) {
  config.Validate();
  if (candidates.empty()) throw DataError("context search over no candidates");
  const ContextVector anchor = EmbedReference(reference, w_position, provider);
  const std::vector<const SentencePair*> eligible =
      EligibleCandidates(reference, candidates, config.candidate_origin);

  std::vector<std::optional<ContextMatch>> scored(eligible.size());
  std::vector<char> zero(eligible.size(), 0);
  ParallelFor(eligible.size(), config.threads, [&](std::size_t c) {
    const SentencePair& p = *eligible[c];
    const std::size_t position =
        SampledPosition(config.seed, p.id, p.target.size());
    const ContextVector v = provider.Embed({p.target.tokens(), position});
    zero[c] = v.norm() == 0.0;
    scored[c] = ContextMatch{p.id, position, Cosine(anchor, v)};
  });
  return Rank(std::move(scored), eligible.size(), eligible.size() + 1,
              std::count(zero.begin(), zero.end(), 1), config);
}

SearchResult ExhaustiveSearch(const SentencePair& reference,
                              std::size_t w_position,
                              const ParallelCorpus& candidates,
                              const EmbeddingProvider& provider,
                              const SearchConfig& config) {
  config.Validate();
  if (candidates.empty()) throw DataError("context search over no candidates");
  const ContextVector anchor = EmbedReference(reference, w_position, provider);
  const std::vector<const SentencePair*> eligible =
      EligibleCandidates(reference, candidates, config.candidate_origin);

  std::vector<std::optional<ContextMatch>> scored(eligible.size());
  std::vector<std::size_t> calls(eligible.size(), 0);
  std::vector<char> zero(eligible.size(), 1);
  ParallelFor(eligible.size(), config.threads, [&](std::size_t c) {
    const SentencePair& p = *eligible[c];
    for (std::size_t pos = 0; pos < p.target.size(); ++pos) {
      const ContextVector v = provider.Embed({p.target.tokens(), pos});
      if (v.norm() != 0.0) zero[c] = 0;
      const double sim = Cosine(anchor, v);
      if (!scored[c] || sim > scored[c]->similarity) {
        scored[c] = ContextMatch{p.id, pos, sim};
      }
    }
    calls[c] = p.target.size();
  });
  std::size_t total_calls = 1;
  for (std::size_t n : calls) total_calls += n;
  return Rank(std::move(scored), eligible.size(), total_calls,
              std::count(zero.begin(), zero.end(), 1), config);
}

std::string RenderMatchDump(std::span<const ContextMatch> matches,
                            const ParallelCorpus& candidates) {
  std::string out;
  for (const ContextMatch& m : matches) {
    const SentencePair* p = candidates.FindById(m.pair_id);
    if (p == nullptr) {
      throw DataError("match refers to unknown pair " +
                      std::to_string(m.pair_id));
    }
    out += std::to_string(m.pair_id) + '\t' + std::to_string(m.position) +
           '\t' + FormatDouble(m.similarity) + '\t' + p->target[m.position] +
           '\t' + p->target.ToString() + '\n';
  }
  return out;
}

}  // namespace fewshot
