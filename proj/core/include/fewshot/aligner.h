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

// Lexical word alignment trained with EM.
//
// IBM Model 1 by default. Setting a diagonal tension switches the alignment
// distribution to the fixed diagonal prior popularised by fast_align
// (tension is not learned). Probabilities are p(target | source) with a
// distinguished NULL source token.

#ifndef FEWSHOT_ALIGNER_H_
#define FEWSHOT_ALIGNER_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fewshot/corpus.h"

namespace fewshot {

inline constexpr std::string_view kNullToken = "<NULL>";

// Probability used for (source, target) pairs never seen together.
inline constexpr double kUnseenProbability = 1e-6;

struct DiagonalPrior {
  double tension = 4.0;
  double null_probability = 0.08;
};

struct AlignerOptions {
  std::size_t iterations = 5;
  std::optional<DiagonalPrior> diagonal;
  int threads = 1;

  void Validate() const;
};

class TranslationTable {
 public:
  struct Entry {
    std::string source;
    std::string target;
    double prob;
  };

  TranslationTable() = default;

  // Uniform initialisation: every co-occurring (source, target) pair,
  // including (NULL, target), gets 1 / |target vocabulary|.
  static TranslationTable Uniform(const ParallelCorpus& corpus);

  // Stored probability, or 0 for a pair never seen together.
  double Prob(std::string_view source, std::string_view target) const;
  bool KnowsTarget(std::string_view target) const;

  const std::optional<DiagonalPrior>& diagonal() const { return diagonal_; }
  void set_diagonal(std::optional<DiagonalPrior> d) { diagonal_ = d; }

  std::size_t size() const { return probs_.size(); }

  // Entries in a stable order (source id, then target id by first
  // appearance in the training corpus).
  std::vector<Entry> Entries() const;

  // Sum of p(t | s) over t for every source token s.
  std::map<std::string, double> RowSums() const;

  // "source<TAB>target<TAB>prob" lines.
  std::string ToTsv() const;
  static TranslationTable FromTsv(std::string_view tsv);

 private:
  friend class ModelOneTrainer;
  friend std::vector<std::vector<double>> AlignmentPosteriors(
      const SentencePair&, const TranslationTable&);
  friend struct Alignment Align(const SentencePair&, const TranslationTable&);

  std::uint32_t InternSource(std::string_view token);
  std::uint32_t InternTarget(std::string_view token);
  std::optional<std::uint32_t> SourceId(std::string_view token) const;
  std::optional<std::uint32_t> TargetId(std::string_view token) const;
  static std::uint64_t Key(std::uint32_t s, std::uint32_t t) {
    return (static_cast<std::uint64_t>(s) << 32) | t;
  }
  // Smoothed lookup by ids; kUnseenProbability when absent.
  double Smoothed(std::optional<std::uint32_t> s, std::uint32_t t) const;

  std::vector<std::string> source_vocab_;  // index 0 is NULL
  std::vector<std::string> target_vocab_;
  std::unordered_map<std::string, std::uint32_t> source_ids_;
  std::unordered_map<std::string, std::uint32_t> target_ids_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> slots_;
  std::vector<double> probs_;
  std::unordered_map<std::uint64_t, std::uint32_t> slot_of_;
  std::optional<DiagonalPrior> diagonal_;
};

struct TrainResult {
  TranslationTable table;
  // log_likelihood[k] is the corpus log-likelihood under the parameters
  // after k EM iterations (k = 0 is the uniform initialisation).
  std::vector<double> log_likelihood;
};

// Throws DataError on an empty corpus, ConfigError on bad options.
TrainResult TrainAligner(const ParallelCorpus& corpus,
                         const AlignerOptions& options);

// Alignment probability of source index i (0-based, NULL excluded) for
// target index j (0-based) under the table's distortion model.
double AlignmentPrior(const std::optional<DiagonalPrior>& diagonal,
                      std::optional<std::size_t> i, std::size_t j,
                      std::size_t source_len, std::size_t target_len);

// posteriors[j][0] is NULL, posteriors[j][i + 1] is source token i; the
// E-step quantity for one sentence pair.
std::vector<std::vector<double>> AlignmentPosteriors(
    const SentencePair& pair, const TranslationTable& table);

struct Alignment {
  PairId pair_id = 0;
  // (source index, target index), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> links;

  std::vector<std::size_t> SourcesFor(std::size_t target_index) const;

  // "i-j i-j ..." in link order.
  std::string ToPharaoh() const;
  // Throws DataError on malformed input.
  static Alignment FromPharaoh(std::string_view line, PairId pair_id);

  friend bool operator==(const Alignment&, const Alignment&) = default;
};

// Viterbi link per target word; ties prefer NULL, then the lowest source
// index. Targets unknown to the table stay unlinked.
Alignment Align(const SentencePair& pair, const TranslationTable& table);

struct LexiconEntry {
  Token source_word;
  std::size_t count = 0;           // links to source_word
  std::size_t linked = 0;          // occurrences of w linked to anything
  std::size_t occurrences = 0;     // occurrences of w seen

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

struct Lexicon {
  std::map<Token, LexiconEntry> entries;
  // Words that never aligned to any source token.
  std::vector<Token> unaligned;

  std::optional<Token> Lookup(std::string_view word) const;

  std::string ToJson() const;
  static Lexicon FromJson(std::string_view json);
};

// For each word, aligns every pair whose target contains it and picks the
// source token most often linked to its occurrences (ties lexicographic).
Lexicon ExtractLexicon(const ParallelCorpus& corpus,
                       const TranslationTable& table,
                       std::span<const Token> words, int threads = 1);

}  // namespace fewshot

#endif  // FEWSHOT_ALIGNER_H_
