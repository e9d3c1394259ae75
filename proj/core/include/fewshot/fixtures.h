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

// Deterministic synthetic bilingual corpora for tests and demos.

#ifndef FEWSHOT_FIXTURES_H_
#define FEWSHOT_FIXTURES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "fewshot/corpus.h"

namespace fewshot {

// A toy language pair whose target sentence is the positionwise image of
// the source sentence under a bijective lexicon.
struct ToyLanguageSpec {
  std::size_t vocab_size = 10;
  // Source/target word pairs. Empty means "s<i>" <-> "t<i>" for
  // i < vocab_size (or "w<i>" on both sides when `copy` is set).
  std::vector<std::pair<Token, Token>> lexicon;
  bool copy = false;
  std::size_t min_length = 3;
  std::size_t max_length = 8;
  std::size_t num_pairs = 100;
  std::uint64_t seed = 1;
  // Never repeat a token within one sentence.
  bool distinct_tokens = false;

  // Throws ConfigError for a non-bijective lexicon or impossible lengths.
  void Validate() const;
  std::vector<std::pair<Token, Token>> ResolvedLexicon() const;
};

ParallelCorpus GenerateCorpus(const ToyLanguageSpec& spec,
                              PairId first_id = 0,
                              Origin origin = Origin::kGenuine);

// A rare word planted into otherwise frequent toy text. The target form and
// source form occupy the same position, so the lexicon alignment stays the
// identity.
struct PlantedWord {
  Token target;
  Token source;
  std::size_t train_sentences = 20;
  std::size_t test_sentences = 5;
};

struct PipelineFixtureSpec {
  ToyLanguageSpec language;  // num_pairs is ignored
  std::size_t background_train = 2000;
  std::size_t background_test = 200;
  std::vector<PlantedWord> planted;
  // Training sentences that carry two planted words at once (consecutive
  // planted words are paired up). Each counts toward both words.
  std::size_t shared_sentences = 0;
  std::uint64_t seed = 7;
};

struct PipelineFixture {
  ParallelCorpus train;
  ParallelCorpus test;
  std::vector<PlantedWord> planted;
};

// Planted words appear exactly train_sentences times in train and
// test_sentences times in test (once per sentence). Background words are
// drawn from the toy vocabulary, which should be small enough that every
// background word is far more frequent than any planted word.
PipelineFixture GeneratePipelineFixture(const PipelineFixtureSpec& spec);

// `count` planted words named like the rare words of a news corpus; the
// first names come from a fixed list, later ones are synthesised.
std::vector<PlantedWord> NewsLikePlantedWords(std::size_t count,
                                              std::size_t train_sentences,
                                              std::size_t test_sentences);

// French-English mini corpus in which "coal" co-occurs with "charbon"; the
// first pair is "le charbon est une énergie non renouvelable ." /
// "coal is a non-renewable energy .".
ParallelCorpus NuclearExampleCorpus();

// The "Sulawesi" reference sentence and a candidate pool that contains the
// five sentences a masked language model retrieves for it, plus
// distractors. English on both sides (context search reads the target).
struct SulawesiExample {
  SentencePair reference;
  std::size_t word_position = 0;
  ParallelCorpus candidates;
  // Ids of the five expected top matches, best first.
  std::vector<PairId> expected_top;
};
SulawesiExample MakeSulawesiExample();

// Writes train.{src,tgt} and test.{src,tgt} under `dir`.
void WritePipelineFixture(const PipelineFixture& fixture,
                          const std::filesystem::path& dir);

}  // namespace fewshot

#endif  // FEWSHOT_FIXTURES_H_
