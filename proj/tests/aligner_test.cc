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

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fewshot/aligner.h"
#include "fewshot/error.h"
#include "fewshot/fixtures.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fewshot {
namespace {

using testing::MakeCorpus;
using testing::MakePair;

// Straightforward IBM Model 1 EM on string-keyed maps, used as an oracle.
struct NaiveModelOne {
  std::map<std::pair<std::string, std::string>, double> t;
  std::vector<double> log_likelihood;

  explicit NaiveModelOne(const ParallelCorpus& corpus, std::size_t iterations) {
    std::map<std::string, int> targets;
    for (const auto& p : corpus.pairs()) {
      for (const auto& f : p.target.tokens()) targets[f] = 1;
    }
    const double init = 1.0 / static_cast<double>(targets.size());
    for (const auto& p : corpus.pairs()) {
      for (const auto& f : p.target.tokens()) {
        t[{std::string(kNullToken), f}] = init;
        for (const auto& e : p.source.tokens()) t[{e, f}] = init;
      }
    }
    for (std::size_t it = 0; it <= iterations; ++it) {
      std::map<std::pair<std::string, std::string>, double> count;
      std::map<std::string, double> total;
      double ll = 0.0;
      for (const auto& p : corpus.pairs()) {
        std::vector<std::string> src = {std::string(kNullToken)};
        for (const auto& e : p.source.tokens()) src.push_back(e);
        for (const auto& f : p.target.tokens()) {
          double z = 0.0;
          for (const auto& e : src) z += t[{e, f}];
          ll += std::log(z / static_cast<double>(src.size()));
          for (const auto& e : src) {
            count[{e, f}] += t[{e, f}] / z;
            total[e] += t[{e, f}] / z;
          }
        }
      }
      log_likelihood.push_back(ll);
      if (it == iterations) break;
      for (auto& [key, value] : t) value = count[key] / total[key.first];
    }
  }
};

ParallelCorpus ToyCorpus(std::size_t vocab, std::size_t pairs, std::uint64_t seed) {
  ToyLanguageSpec spec;
  spec.vocab_size = vocab;
  spec.num_pairs = pairs;
  spec.seed = seed;
  return GenerateCorpus(spec);
}

TEST(AlignerTest, OnePairPosteriorsAreHalf) {
  const ParallelCorpus c = MakeCorpus({{"x", "y"}});
  const TranslationTable uniform = TranslationTable::Uniform(c);
  const auto post = AlignmentPosteriors(c[0], uniform);
  ASSERT_EQ(post.size(), 1u);
  EXPECT_EQ(post[0][0], 0.5);  // NULL
  EXPECT_EQ(post[0][1], 0.5);  // x

  AlignerOptions o;
  o.iterations = 1;
  const TrainResult r = TrainAligner(c, o);
  // Normalising the half counts over each source row gives 1.
  EXPECT_EQ(r.table.Prob("x", "y"), 1.0);
  EXPECT_EQ(r.table.Prob(kNullToken, "y"), 1.0);
}

TEST(AlignerTest, OneIterationHandComputed) {
  // Uniform start t = 1/2. Pair 1 splits x over {NULL, a}; pair 2 splits
  // x and y over {NULL, a, b}. Counts: c(a,x) = 1/2 + 1/3, c(a,y) = 1/3,
  // so t(x|a) = 5/7; c(b,x) = c(b,y) = 1/3, so t(x|b) = 1/2.
  const ParallelCorpus c = MakeCorpus({{"a", "x"}, {"a b", "x y"}});
  AlignerOptions o;
  o.iterations = 1;
  const TrainResult r = TrainAligner(c, o);
  EXPECT_NEAR(r.table.Prob("a", "x"), 5.0 / 7.0, 1e-15);
  EXPECT_NEAR(r.table.Prob("a", "y"), 2.0 / 7.0, 1e-15);
  EXPECT_NEAR(r.table.Prob(kNullToken, "x"), 5.0 / 7.0, 1e-15);
  EXPECT_NEAR(r.table.Prob("b", "x"), 0.5, 1e-15);
  EXPECT_NEAR(r.table.Prob("b", "y"), 0.5, 1e-15);
  // LL at the uniform start: three target tokens, each log(1/2).
  EXPECT_NEAR(r.log_likelihood[0], 3.0 * std::log(0.5), 1e-12);
}

TEST(AlignerTest, MatchesNaiveEmOracle) {
  const ParallelCorpus c = ToyCorpus(12, 150, 3);
  AlignerOptions o;
  const TrainResult r = TrainAligner(c, o);
  const NaiveModelOne oracle(c, o.iterations);
  ASSERT_EQ(r.log_likelihood.size(), oracle.log_likelihood.size());
  for (std::size_t k = 0; k < r.log_likelihood.size(); ++k) {
    EXPECT_NEAR(r.log_likelihood[k], oracle.log_likelihood[k],
                1e-9 * std::abs(oracle.log_likelihood[k]));
  }
  for (const auto& [key, value] : oracle.t) {
    EXPECT_NEAR(r.table.Prob(key.first, key.second), value, 1e-12)
        << key.first << " " << key.second;
  }
  EXPECT_EQ(r.table.size(), oracle.t.size());
}

TEST(AlignerTest, LogLikelihoodNonDecreasingAndRowsNormalized) {
  for (std::uint64_t seed : {1, 2, 3}) {
    for (bool diagonal : {false, true}) {
      AlignerOptions o;
      o.iterations = 8;
      if (diagonal) o.diagonal = DiagonalPrior{};
      const TrainResult r = TrainAligner(ToyCorpus(20, 120, seed), o);
      ASSERT_EQ(r.log_likelihood.size(), 9u);
      for (std::size_t k = 1; k < r.log_likelihood.size(); ++k) {
        EXPECT_GE(r.log_likelihood[k], r.log_likelihood[k - 1] - 1e-12);
      }
      for (const auto& [source, sum] : r.table.RowSums()) {
        EXPECT_NEAR(sum, 1.0, 1e-9) << source;
      }
    }
  }
}

TEST(AlignerTest, ThreadCountDoesNotChangeResults) {
  const ParallelCorpus c = ToyCorpus(15, 1000, 4);
  AlignerOptions o;
  const TrainResult one = TrainAligner(c, o);
  o.threads = 4;
  const TrainResult four = TrainAligner(c, o);
  EXPECT_EQ(one.table.ToTsv(), four.table.ToTsv());
  EXPECT_EQ(one.log_likelihood, four.log_likelihood);
}

TEST(AlignerTest, RecoversBijectiveLexicon) {
  const ToyLanguageSpec spec;  // vocab 10, 100 pairs
  const ParallelCorpus c = GenerateCorpus(spec);
  const TrainResult r = TrainAligner(c, AlignerOptions{});
  std::vector<Token> targets;
  for (const auto& [s, t] : spec.ResolvedLexicon()) targets.push_back(t);
  const Lexicon lex = ExtractLexicon(c, r.table, targets);
  for (const auto& [s, t] : spec.ResolvedLexicon()) {
    EXPECT_EQ(lex.Lookup(t), s) << t;
  }
  EXPECT_TRUE(lex.unaligned.empty());
}

TEST(AlignerTest, CopyLanguageAlignsIdentity) {
  ToyLanguageSpec spec;
  spec.copy = true;
  spec.distinct_tokens = true;
  const ParallelCorpus c = GenerateCorpus(spec);
  const TrainResult r = TrainAligner(c, AlignerOptions{});
  for (const auto& p : c.pairs()) {
    const Alignment a = Align(p, r.table);
    ASSERT_EQ(a.links.size(), p.target.size());
    for (std::size_t j = 0; j < a.links.size(); ++j) {
      EXPECT_EQ(a.links[j], std::make_pair(j, j));
    }
  }
  // p(w3 | w3) climbs toward 1 as iterations grow.
  double previous = 0.0;
  for (std::size_t iterations : {1, 5, 20, 60}) {
    AlignerOptions o;
    o.iterations = iterations;
    const double p = TrainAligner(c, o).table.Prob("w3", "w3");
    EXPECT_GT(p, previous);
    previous = p;
  }
  EXPECT_GT(previous, 0.99);
}

TEST(AlignerTest, UnseenTargetGetsNoLink) {
  const ParallelCorpus c = MakeCorpus({{"a b", "x y"}, {"a", "x"}, {"b", "y"}});
  const TrainResult r = TrainAligner(c, AlignerOptions{});
  const Alignment a = Align(MakePair(9, "a b", "x zzz"), r.table);
  EXPECT_TRUE(a.SourcesFor(1).empty());
  EXPECT_EQ(a.SourcesFor(0), (std::vector<std::size_t>{0}));
}

TEST(AlignerTest, CoalAlignsToCharbon) {
  const ParallelCorpus c = NuclearExampleCorpus();
  const TrainResult r = TrainAligner(c, AlignerOptions{});
  const std::vector<Token> words = {"coal"};
  EXPECT_EQ(ExtractLexicon(c, r.table, words).Lookup("coal"), "charbon");
  const Alignment a = Align(c[0], r.table);
  // "le charbon est ..." / "coal is ..."
  EXPECT_EQ(a.SourcesFor(0), (std::vector<std::size_t>{1}));
}

TEST(AlignerTest, DiagonalPriorShape) {
  const DiagonalPrior d;
  double sum = AlignmentPrior(d, std::nullopt, 2, 6, 5);
  EXPECT_DOUBLE_EQ(sum, 0.08);
  double best = 0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    const double p = AlignmentPrior(d, i, 2, 6, 5);
    sum += p;
    if (p > best) {
      best = p;
      best_i = i;
    }
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  // Target 3 of 5 sits nearest source 4 of 6 (0.6 vs 0.667).
  EXPECT_EQ(best_i, 3u);
  EXPECT_DOUBLE_EQ(AlignmentPrior(std::nullopt, 1, 0, 3, 3), 0.25);
}

TEST(LexiconTest, CountingArgmaxAndTies) {
  const TranslationTable table =
      TranslationTable::FromTsv("p\tw\t0.9\nq\tw\t0.5\n<NULL>\tw\t0.01\n");
  const ParallelCorpus c = MakeCorpus(
      {{"p", "w"}, {"p", "w"}, {"p", "w"}, {"q", "w"}, {"q p", "w w"}});
  const std::vector<Token> words = {"w"};
  const Lexicon lex = ExtractLexicon(c, table, words);
  const LexiconEntry& e = lex.entries.at("w");
  EXPECT_EQ(e.source_word, "p");
  EXPECT_EQ(e.count, 5u);
  EXPECT_EQ(e.occurrences, 6u);
  EXPECT_EQ(e.linked, 6u);

  const ParallelCorpus tied = MakeCorpus({{"q", "w"}, {"p", "w"}});
  EXPECT_EQ(ExtractLexicon(tied, table, words).Lookup("w"), "p");
  const std::vector<Token> missing = {"zz"};
  const Lexicon none = ExtractLexicon(tied, table, missing);
  EXPECT_FALSE(none.Lookup("zz").has_value());
  EXPECT_EQ(none.unaligned, missing);
}

TEST(LexiconTest, MatchesBruteForceRecount) {
  const ParallelCorpus c = ToyCorpus(12, 300, 8);
  const TrainResult r = TrainAligner(c, AlignerOptions{});
  std::vector<Token> words;
  for (int i = 0; i < 12; ++i) words.push_back("t" + std::to_string(i));
  const Lexicon lex = ExtractLexicon(c, r.table, words, 3);

  std::map<Token, std::map<Token, std::size_t>> recount;
  for (const auto& p : c.pairs()) {
    const Alignment a = Align(p, r.table);
    for (const auto& [i, j] : a.links) ++recount[p.target[j]][p.source[i]];
  }
  for (const Token& w : words) {
    const auto& counts = recount[w];
    Token best;
    std::size_t best_n = 0;
    for (const auto& [s, n] : counts) {
      if (n > best_n || (n == best_n && s < best)) {
        best = s;
        best_n = n;
      }
    }
    EXPECT_EQ(lex.entries.at(w).source_word, best);
    EXPECT_EQ(lex.entries.at(w).count, best_n);
  }
}

TEST(LexiconTest, JsonRoundTrip) {
  Lexicon lex;
  lex.entries["w"] = {"p", 3, 4, 5};
  lex.unaligned = {"z"};
  const Lexicon back = Lexicon::FromJson(lex.ToJson());
  EXPECT_EQ(back.entries, lex.entries);
  EXPECT_EQ(back.unaligned, lex.unaligned);
  EXPECT_THROW(Lexicon::FromJson("[1]"), DataError);
}

TEST(TranslationTableTest, TsvRoundTrip) {
  const TrainResult r = TrainAligner(ToyCorpus(8, 50, 9), AlignerOptions{});
  const TranslationTable back = TranslationTable::FromTsv(r.table.ToTsv());
  EXPECT_EQ(back.ToTsv(), r.table.ToTsv());
  EXPECT_EQ(back.Prob("s1", "t1"), r.table.Prob("s1", "t1"));
  EXPECT_THROW(TranslationTable::FromTsv("a\tb\n"), DataError);
  EXPECT_THROW(TranslationTable::FromTsv("a\tb\tx\n"), DataError);
}

TEST(AlignmentTest, PharaohRoundTrip) {
  const Alignment a = Alignment::FromPharaoh("0-1 2-0 3-1", 7);
  EXPECT_EQ(a.pair_id, 7u);
  EXPECT_EQ(a.SourcesFor(1), (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(Alignment::FromPharaoh(a.ToPharaoh(), 7), a);
  EXPECT_TRUE(Alignment::FromPharaoh("", 1).links.empty());
  EXPECT_THROW(Alignment::FromPharaoh("0-", 1), DataError);
  EXPECT_THROW(Alignment::FromPharaoh("a-b", 1), DataError);
}

TEST(AlignerTest, RejectsBadInput) {
  EXPECT_THROW(TrainAligner(ParallelCorpus(), AlignerOptions{}), DataError);
  AlignerOptions o;
  o.iterations = 0;
  EXPECT_THROW(o.Validate(), ConfigError);
}

}  // namespace
}  // namespace fewshot
