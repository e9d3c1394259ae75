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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fewshot/error.h"
#include "fewshot/fixtures.h"
#include "fewshot/text_io.h"
#include "fewshot/wordselect.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fewshot {
namespace {

TEST(ToyLanguageTest, ValidateRejectsBadSpecs) {
  ToyLanguageSpec spec;
  EXPECT_NO_THROW(spec.Validate());
  spec.lexicon = {{"a", "x"}, {"b", "x"}};
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec.lexicon = {{"a", "x"}, {"a", "y"}};
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec = ToyLanguageSpec{};
  spec.min_length = 5;
  spec.max_length = 4;
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec = ToyLanguageSpec{};
  spec.min_length = 0;
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec = ToyLanguageSpec{};
  spec.distinct_tokens = true;
  spec.max_length = spec.vocab_size + 1;
  EXPECT_THROW(spec.Validate(), ConfigError);
}

TEST(ToyLanguageTest, ResolvedLexicon) {
  ToyLanguageSpec spec;
  spec.vocab_size = 3;
  const auto lex = spec.ResolvedLexicon();
  ASSERT_EQ(lex.size(), 3u);
  EXPECT_EQ(lex[2], (std::pair<Token, Token>{"s2", "t2"}));
  spec.copy = true;
  EXPECT_EQ(spec.ResolvedLexicon()[1], (std::pair<Token, Token>{"w1", "w1"}));
  spec.lexicon = {{"chat", "cat"}};
  EXPECT_EQ(spec.ResolvedLexicon().size(), 1u);
}

TEST(ToyLanguageTest, TargetIsPositionwiseImage) {
  ToyLanguageSpec spec;
  spec.vocab_size = 12;
  spec.num_pairs = 300;
  spec.min_length = 1;
  spec.max_length = 6;
  std::map<Token, Token> lex;
  for (const auto& [s, t] : spec.ResolvedLexicon()) lex[s] = t;
  const ParallelCorpus corpus = GenerateCorpus(spec, 40);
  ASSERT_EQ(corpus.size(), 300u);
  EXPECT_EQ(corpus[0].id, 40u);
  std::set<std::size_t> lengths;
  for (const SentencePair& p : corpus.pairs()) {
    ASSERT_EQ(p.source.size(), p.target.size());
    lengths.insert(p.source.size());
    for (std::size_t i = 0; i < p.source.size(); ++i) {
      EXPECT_EQ(lex.at(p.source[i]), p.target[i]);
    }
  }
  EXPECT_EQ(*lengths.begin(), 1u);
  EXPECT_EQ(*lengths.rbegin(), 6u);
}

TEST(ToyLanguageTest, LengthOneAndDistinctTokens) {
  ToyLanguageSpec spec;
  spec.min_length = spec.max_length = 1;
  spec.num_pairs = 20;
  const ParallelCorpus singles = GenerateCorpus(spec);
  for (const SentencePair& p : singles.pairs()) {
    EXPECT_EQ(p.target.size(), 1u);
  }
  spec.min_length = spec.max_length = spec.vocab_size;
  spec.distinct_tokens = true;
  const ParallelCorpus full = GenerateCorpus(spec);
  for (const SentencePair& p : full.pairs()) {
    const std::set<Token> seen(p.target.tokens().begin(), p.target.tokens().end());
    EXPECT_EQ(seen.size(), spec.vocab_size);
  }
}

TEST(ToyLanguageTest, DeterministicUnderSeed) {
  ToyLanguageSpec spec;
  const ParallelCorpus a = GenerateCorpus(spec);
  const ParallelCorpus b = GenerateCorpus(spec);
  spec.seed = 2;
  const ParallelCorpus c = GenerateCorpus(spec);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].target, b[i].target);
    differs |= !(a[i].target == c[i].target);
  }
  EXPECT_TRUE(differs);
}

PipelineFixtureSpec SmallFixture() {
  PipelineFixtureSpec spec;
  spec.language.vocab_size = 30;
  spec.background_train = 500;
  spec.background_test = 50;
  spec.planted = NewsLikePlantedWords(6, 20, 5);
  return spec;
}

TEST(PipelineFixtureTest, PlantedCountsAreExact) {
  const PipelineFixture f = GeneratePipelineFixture(SmallFixture());
  EXPECT_EQ(f.train.size(), 500u + 6u * 20u);
  EXPECT_EQ(f.test.size(), 50u + 6u * 5u);
  for (const PlantedWord& w : f.planted) {
    EXPECT_EQ(f.train.frequencies(Side::kTarget).Count(w.target), 20u);
    EXPECT_EQ(f.test.frequencies(Side::kTarget).Count(w.target), 5u);
    EXPECT_EQ(f.train.frequencies(Side::kSource).Count(w.source), 20u);
  }
  for (const SentencePair& p : f.train.pairs()) {
    for (const PlantedWord& w : f.planted) {
      const auto at = p.target.Find(w.target);
      if (!at) continue;
      EXPECT_EQ(p.source[*at], w.source);
    }
  }
  for (std::size_t i = 0; i < f.train.size(); ++i) EXPECT_EQ(f.train[i].id, i);
}

TEST(PipelineFixtureTest, SharedSentencesCountForBothWords) {
  PipelineFixtureSpec spec = SmallFixture();
  spec.shared_sentences = 3;
  const PipelineFixture f = GeneratePipelineFixture(spec);
  for (const PlantedWord& w : f.planted) {
    EXPECT_EQ(f.train.frequencies(Side::kTarget).Count(w.target), 20u);
  }
  EXPECT_EQ(f.train.size(), 500u + 6u * 20u - 3u);
  // Shared sentence s carries planted words 2s and 2s + 1.
  for (std::size_t s = 0; s < 3; ++s) {
    std::size_t both = 0;
    for (const SentencePair& p : f.train.pairs()) {
      both += p.target.Contains(f.planted[2 * s].target) &&
              p.target.Contains(f.planted[2 * s + 1].target);
    }
    EXPECT_EQ(both, 1u) << s;
  }
}

TEST(PipelineFixtureTest, SelectionFindsExactlyThePlantedWords) {
  const PipelineFixture f = GeneratePipelineFixture(SmallFixture());
  SelectionCriteria criteria;
  criteria.max_words = 6;
  const auto words = SelectWords(f.train, f.test, criteria);
  std::set<Token> selected, planted;
  for (const auto& w : words) selected.insert(w.target_word);
  for (const auto& w : f.planted) planted.insert(w.target);
  EXPECT_EQ(selected, planted);
}

TEST(PipelineFixtureTest, DeterministicAndWritable) {
  const PipelineFixture a = GeneratePipelineFixture(SmallFixture());
  const PipelineFixture b = GeneratePipelineFixture(SmallFixture());
  testing::TempDir dir_a, dir_b;
  WritePipelineFixture(a, dir_a.path());
  WritePipelineFixture(b, dir_b.path());
  for (const char* name : {"train.src", "train.tgt", "test.src", "test.tgt"}) {
    EXPECT_EQ(ReadFile(dir_a / name), ReadFile(dir_b / name)) << name;
  }
  EXPECT_EQ(ReadLines(dir_a / "train.tgt").size(), a.train.size());
}

TEST(NewsLikeWordsTest, ListAndExtras) {
  const auto words = NewsLikePlantedWords(96, 20, 5);
  ASSERT_EQ(words.size(), 96u);
  std::set<Token> names;
  for (const auto& w : words) {
    names.insert(w.target);
    EXPECT_EQ(w.source, "src_" + w.target);
    EXPECT_EQ(w.train_sentences, 20u);
  }
  EXPECT_EQ(names.size(), 96u);
  EXPECT_TRUE(names.count("Sulawesi"));
  const auto more = NewsLikePlantedWords(100, 20, 5);
  EXPECT_EQ(more[99].target, "rare99");
}

TEST(ExampleCorporaTest, NuclearAndSulawesi) {
  const ParallelCorpus nuclear = NuclearExampleCorpus();
  EXPECT_EQ(nuclear[0].source.ToString(),
            "le charbon est une énergie non renouvelable .");
  EXPECT_EQ(nuclear[0].target.ToString(), "coal is a non-renewable energy .");
  const SulawesiExample s = MakeSulawesiExample();
  EXPECT_EQ(s.reference.target[s.word_position], "Sulawesi");
  EXPECT_EQ(s.expected_top.size(), 5u);
  for (PairId id : s.expected_top) EXPECT_NE(s.candidates.FindById(id), nullptr);
  EXPECT_EQ(s.candidates.FindById(s.reference.id), nullptr);
}

}  // namespace
}  // namespace fewshot
