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

// Evaluation-word selection and the held-out split of the training corpus.

#ifndef FEWSHOT_WORDSELECT_H_
#define FEWSHOT_WORDSELECT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fewshot/corpus.h"

namespace fewshot {

struct SelectionCriteria {
  std::size_t min_test_count = 5;
  std::size_t min_train_count = 20;
  std::size_t max_words = 100;
  // Words dropped after ranking (manual curation).
  std::set<Token> exclusion_list;
  CountUnit count_unit = CountUnit::kToken;

  // Throws ConfigError if a threshold is zero.
  void Validate() const;
};

struct EvaluationWord {
  Token target_word;
  std::optional<Token> source_word;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::vector<PairId> held_out;

  friend bool operator==(const EvaluationWord&,
                         const EvaluationWord&) = default;
};

struct FilteredSplit {
  ParallelCorpus filtered_training;
  std::vector<EvaluationWord> evaluation_words;
  // Pairs whose target contains the word, in corpus order. A pair holding
  // two evaluation words is listed under both.
  std::map<Token, std::vector<SentencePair>> held_out_pool;
  // Number of distinct pairs removed from training.
  std::size_t held_out_pairs = 0;
};

// Target-side words meeting both count thresholds, ranked by ascending
// training count (ties lexicographic). The first max_words are kept and
// exclusion_list entries are then removed. Throws DataError if nothing
// qualifies.
std::vector<EvaluationWord> SelectWords(const ParallelCorpus& train,
                                        const ParallelCorpus& test,
                                        const SelectionCriteria& criteria);

// Moves every pair whose target sentence contains an evaluation word into
// the held-out pool. Ids are preserved. Fills EvaluationWord::held_out.
FilteredSplit SplitCorpus(const ParallelCorpus& train,
                          std::vector<EvaluationWord> words);

// `n` distinct pairs drawn uniformly from `pool`, in draw order. Throws
// DataError if the pool holds fewer than `n` pairs.
std::vector<SentencePair> SampleReferences(std::span<const SentencePair> pool,
                                           std::size_t n, std::uint64_t seed);

// One word per line; blank lines ignored.
std::set<Token> LoadWordList(const std::filesystem::path& path);

// JSON array of {word, source_word, train_count, test_count, held_out_ids}.
std::string EvaluationWordsToJson(std::span<const EvaluationWord> words);
std::vector<EvaluationWord> EvaluationWordsFromJson(std::string_view json);

}  // namespace fewshot

#endif  // FEWSHOT_WORDSELECT_H_
