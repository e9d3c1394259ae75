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

// Synthesis of new parallel pairs by substituting a novel word and its
// translation into retrieved sentences.

#ifndef FEWSHOT_AUGMENT_H_
#define FEWSHOT_AUGMENT_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "fewshot/aligner.h"
#include "fewshot/corpus.h"
#include "fewshot/ctxsearch.h"
#include "fewshot/embed.h"

namespace fewshot {

// Continuation marker left by BPE segmentation; augmentation refuses input
// carrying it.
inline constexpr std::string_view kSubwordMarker = "@@";

enum class DiscardReason {
  kNoAlignedSource,
  kNonConsecutiveAlignment,
  kWordAlreadyPresent,
  kDegenerate,
};

std::string_view DiscardReasonName(DiscardReason reason);

struct Provenance {
  PairId source_pair_id = 0;
  std::size_t masked_position = 0;
  // Replaced source span [span_begin, span_end).
  std::size_t span_begin = 0;
  std::size_t span_end = 0;
  Token word;
  Token source_word;
  double similarity = 0.0;
};

struct SyntheticPair {
  SentencePair pair;
  Provenance provenance;
};

struct DiscardRecord {
  PairId pair_id = 0;
  DiscardReason reason = DiscardReason::kDegenerate;
  std::size_t position = 0;
};

// The target token at match.position becomes `word`; the contiguous source
// span aligned to it becomes the single token `source_word`. Returns a
// DiscardRecord when the candidate cannot be used.
std::variant<SyntheticPair, DiscardRecord> Substitute(
    const ContextMatch& match, const SentencePair& candidate,
    const Alignment& alignment, std::string_view word,
    std::string_view source_word);

// Where candidate alignments come from.
class AlignmentSource {
 public:
  virtual ~AlignmentSource() = default;
  virtual Alignment AlignmentFor(const SentencePair& pair) const = 0;
};

// Viterbi alignments from a trained table.
class TableAlignmentSource : public AlignmentSource {
 public:
  explicit TableAlignmentSource(const TranslationTable& table)
      : table_(table) {}
  Alignment AlignmentFor(const SentencePair& pair) const override {
    return Align(pair, table_);
  }

 private:
  const TranslationTable& table_;
};

// Precomputed alignments keyed by pair id (e.g. read from a Pharaoh file).
// Pairs without an entry get an empty alignment.
class FixedAlignmentSource : public AlignmentSource {
 public:
  explicit FixedAlignmentSource(std::unordered_map<PairId, Alignment> links)
      : links_(std::move(links)) {}
  Alignment AlignmentFor(const SentencePair& pair) const override;

 private:
  std::unordered_map<PairId, Alignment> links_;
};

struct ReferenceQuery {
  SentencePair pair;
  std::size_t w_position = 0;
};

struct AugmentConfig {
  std::size_t per_reference_target = 19;
  // Initial search depth; 0 means 3 * per_reference_target.
  std::size_t k = 0;
  // Seed, origin filter and similarity floor for the context search. Its k
  // field is ignored.
  SearchConfig search;

  std::size_t EffectiveK() const {
    return k == 0 ? 3 * per_reference_target : k;
  }
  void Validate() const;
};

struct ReferenceAugmentation {
  PairId reference_id = 0;
  std::vector<SyntheticPair> synthetics;  // in rank order
  std::vector<DiscardRecord> discards;
  std::size_t attempts = 0;
  bool shortfall = false;
};

struct AugmentResult {
  Token word;
  Token source_word;
  std::vector<ReferenceAugmentation> references;

  std::size_t attempts() const;
  std::size_t successes() const;
  std::map<DiscardReason, std::size_t> DiscardCounts() const;
};

// True if any token carries the subword continuation marker.
bool HasSubwordMarker(const Sentence& sentence);

// For each reference: context search, then substitution in rank order until
// per_reference_target synthetics exist. A short run doubles k and retries
// once before warning. Throws DataError if the lexicon lacks `word` or the
// input looks subword-segmented.
AugmentResult AugmentWord(std::string_view word,
                          std::span<const ReferenceQuery> references,
                          const ParallelCorpus& candidates,
                          const EmbeddingProvider& provider,
                          const AlignmentSource& alignments,
                          const Lexicon& lexicon, const AugmentConfig& config);

// Sidecar JSON with provenance and discard statistics (and the synthetic
// text, so a later stage can reload the pool).
std::string AugmentResultsToJson(std::span<const AugmentResult> results);
std::vector<AugmentResult> AugmentResultsFromJson(std::string_view json);

}  // namespace fewshot

#endif  // FEWSHOT_AUGMENT_H_
