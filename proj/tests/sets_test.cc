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

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fewshot/error.h"
#include "fewshot/sets.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace fewshot {
namespace {

using testing::MakePair;

// Word i gets references with ids 1000*(i+1)+r, each carrying `synth`
// synthetic pairs whose target mentions the word.
std::vector<WordMaterial> Materials(std::size_t n_words, std::size_t n_refs,
                                    std::size_t synth) {
  std::vector<WordMaterial> out;
  for (std::size_t i = 0; i < n_words; ++i) {
    WordMaterial m;
    m.word = "w" + std::to_string(i);
    for (std::size_t r = 0; r < n_refs; ++r) {
      const PairId id = 1000 * (i + 1) + r;
      m.references.push_back(
          MakePair(id, "src_" + m.word + " r" + std::to_string(r),
                   m.word + " r" + std::to_string(r)));
      std::vector<SyntheticPair> pool;
      for (std::size_t s = 0; s < synth; ++s) {
        SyntheticPair p;
        p.pair = MakePair(id, "src_" + m.word + " s" + std::to_string(s),
                          m.word + " s" + std::to_string(s));
        p.provenance.source_pair_id = 500000 + 100 * r + s;
        p.provenance.word = m.word;
        pool.push_back(p);
      }
      m.synthetics.push_back(std::move(pool));
    }
    out.push_back(std::move(m));
  }
  return out;
}

ParallelCorpus Background(std::size_t n) {
  std::vector<SentencePair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    pairs.push_back(MakePair(i, "bs" + std::to_string(i), "bt" + std::to_string(i)));
  }
  return ParallelCorpus(std::move(pairs));
}

std::multiset<std::string> TargetsWithRole(const FinetuneSet& set, Role role,
                                           const Token& word) {
  std::multiset<std::string> out;
  for (const SetEntry& e : set.entries) {
    if (e.role == role && e.word == word) out.insert(e.pair.target.ToString());
  }
  return out;
}

TEST(ApproachSpecTest, SharesFromRatio) {
  EXPECT_EQ(ApproachSpec::Make(ApproachKind::kFinetune, 1),
            (ApproachSpec{ApproachKind::kFinetune, 1, 0, 0}));
  EXPECT_EQ(ApproachSpec::Make(ApproachKind::kRandomPad, 2),
            (ApproachSpec{ApproachKind::kRandomPad, 2, 0, 1}));
  EXPECT_EQ(ApproachSpec::Make(ApproachKind::kRandomPad, 20),
            (ApproachSpec{ApproachKind::kRandomPad, 20, 0, 19}));
  EXPECT_EQ(ApproachSpec::Make(ApproachKind::kAugmented, 20),
            (ApproachSpec{ApproachKind::kAugmented, 20, 19, 0}));
  EXPECT_EQ(ApproachSpec::Make(ApproachKind::kHalf, 20),
            (ApproachSpec{ApproachKind::kHalf, 20, 10, 9}));
  EXPECT_EQ(ApproachSpec::Make(ApproachKind::kHalf, 3),
            (ApproachSpec{ApproachKind::kHalf, 3, 1, 1}));
}

TEST(ApproachSpecTest, ParseAndLabels) {
  EXPECT_EQ(ApproachSpec::Parse("finetune"),
            ApproachSpec::Make(ApproachKind::kFinetune, 1));
  EXPECT_EQ(ApproachSpec::Parse("half(20)"),
            ApproachSpec::Make(ApproachKind::kHalf, 20));
  EXPECT_EQ(ApproachSpec::Parse("randompad(2)"),
            ApproachSpec::Make(ApproachKind::kRandomPad, 2));
  EXPECT_EQ(ApproachSpec::Parse("half(20)").Label(), "half(20)");
  EXPECT_EQ(ApproachSpec::Parse("finetune").Label(), "finetune");
  EXPECT_EQ(ApproachSpec::Parse("half(20)").FileStem(3), "half_20_3");
  EXPECT_EQ(ApproachSpec::Parse("finetune").FileStem(15), "finetune_1_15");
  EXPECT_EQ(ApproachSpec::Parse(ApproachSpec::Parse("augmented(7)").Label()),
            ApproachSpec::Make(ApproachKind::kAugmented, 7));
}

TEST(ApproachSpecTest, RejectsMalformed) {
  for (const char* bad : {"", "finetune(2)", "half", "half()", "half(x)",
                          "half(20", "bogus(3)", "randompad(1)", "half(2)",
                          "augmented(0)", "randompad(-3)"}) {
    EXPECT_THROW(ApproachSpec::Parse(bad), ConfigError) << bad;
  }
}

TEST(ApproachSpecTest, ValidateChecksDefinition) {
  EXPECT_THROW((ApproachSpec{ApproachKind::kFinetune, 2, 0, 1}.Validate()),
               ConfigError);
  EXPECT_THROW((ApproachSpec{ApproachKind::kRandomPad, 3, 1, 1}.Validate()),
               ConfigError);
  EXPECT_THROW((ApproachSpec{ApproachKind::kAugmented, 3, 1, 0}.Validate()),
               ConfigError);
  EXPECT_NO_THROW((ApproachSpec{ApproachKind::kHalf, 20, 10, 9}.Validate()));
}

TEST(OccurrenceScheduleTest, Validate) {
  EXPECT_NO_THROW(OccurrenceSchedule{}.Validate());
  EXPECT_EQ(OccurrenceSchedule{}.steps,
            (std::vector<std::size_t>{1, 2, 3, 5, 10, 15, 20}));
  EXPECT_THROW(OccurrenceSchedule{{}}.Validate(), ConfigError);
  EXPECT_THROW((OccurrenceSchedule{{0, 1}}.Validate()), ConfigError);
  EXPECT_THROW((OccurrenceSchedule{{1, 3, 3}}.Validate()), ConfigError);
  EXPECT_THROW((OccurrenceSchedule{{2, 1}}.Validate()), ConfigError);
}

TEST(BuildSetTest, FinetuneHasOnlyReferences) {
  const auto words = Materials(96, 3, 0);
  const FinetuneSet set =
      BuildSet(ApproachSpec::Parse("finetune"), 3, words, Background(10), 1);
  EXPECT_EQ(set.n_ref, 288u);
  EXPECT_EQ(set.n_synth, 0u);
  EXPECT_EQ(set.n_rand, 0u);
  EXPECT_EQ(set.entries.size(), 288u);
  EXPECT_EQ(set.dedup_adjustments, 0u);
}

TEST(BuildSetTest, HalfComposition) {
  const auto words = Materials(2, 1, 19);
  const FinetuneSet set =
      BuildSet(ApproachSpec::Parse("half(20)"), 1, words, Background(100), 1);
  EXPECT_EQ(set.n_ref, 2u);
  EXPECT_EQ(set.n_synth, 20u);
  EXPECT_EQ(set.n_rand, 18u);
  for (const WordMaterial& w : words) {
    EXPECT_EQ(TargetsWithRole(set, Role::kReference, w.word).size(), 1u);
    EXPECT_EQ(TargetsWithRole(set, Role::kSynthetic, w.word).size(), 10u);
    EXPECT_EQ(TargetsWithRole(set, Role::kRandom, w.word).size(), 9u);
  }
}

TEST(BuildSetTest, RatioHoldsAcrossApproachesAndSteps) {
  const auto words = Materials(4, 5, 19);
  for (const char* text : {"finetune", "randompad(2)", "randompad(20)",
                           "augmented(20)", "half(20)", "half(5)"}) {
    const ApproachSpec a = ApproachSpec::Parse(text);
    for (std::size_t c : {1, 2, 5}) {
      const FinetuneSet set = BuildSet(a, c, words, Background(500), 9);
      EXPECT_EQ(set.n_ref, 4 * c) << text;
      EXPECT_EQ(set.n_total(), a.ratio * set.n_ref) << text;
      EXPECT_EQ(set.n_synth, 4 * c * a.synth_share) << text;
      EXPECT_EQ(set.n_rand, 4 * c * a.rand_share) << text;
      EXPECT_EQ(set.entries.size(), set.n_total());
    }
  }
}

TEST(BuildSetTest, SharedReferenceIsCountedOnce) {
  auto words = Materials(2, 2, 1);
  words[1].references[0] = words[0].references[0];
  const FinetuneSet set =
      BuildSet(ApproachSpec::Parse("randompad(2)"), 2, words, Background(10), 3);
  EXPECT_EQ(set.n_ref, 3u);
  EXPECT_EQ(set.dedup_adjustments, 1u);
  // Companions are still added for each word.
  EXPECT_EQ(set.n_rand, 4u);
  EXPECT_EQ(set.n_synth + set.n_rand,
            (set.approach.ratio - 1) * (set.n_ref + set.dedup_adjustments));
}

TEST(BuildSetTest, RandomPaddingIsDistinctFilteredPairs) {
  const auto words = Materials(3, 4, 0);
  const ParallelCorpus filtered = Background(200);
  const FinetuneSet set =
      BuildSet(ApproachSpec::Parse("randompad(20)"), 3, words, filtered, 5);
  std::set<PairId> ids;
  for (const SetEntry& e : set.entries) {
    if (e.role != Role::kRandom) continue;
    ASSERT_NE(filtered.FindById(e.pair.id), nullptr);
    EXPECT_TRUE(ids.insert(e.pair.id).second) << "repeated " << e.pair.id;
    for (const WordMaterial& w : words) {
      EXPECT_FALSE(e.pair.target.Contains(w.word));
    }
  }
  EXPECT_EQ(ids.size(), 3u * 3u * 19u);
}

TEST(BuildSetTest, AugmentedUsesTopRankedSynthetics) {
  const auto words = Materials(1, 2, 25);
  const FinetuneSet set =
      BuildSet(ApproachSpec::Parse("augmented(20)"), 2, words, Background(1), 5);
  std::multiset<std::string> expected;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t s = 0; s < 19; ++s) {
      expected.insert(words[0].synthetics[r][s].pair.target.ToString());
    }
  }
  EXPECT_EQ(TargetsWithRole(set, Role::kSynthetic, "w0"), expected);
}

TEST(BuildSetTest, DeterministicAndSeedSensitive) {
  const auto words = Materials(5, 3, 19);
  const ApproachSpec a = ApproachSpec::Parse("half(20)");
  const FinetuneSet x = BuildSet(a, 3, words, Background(400), 11);
  const FinetuneSet y = BuildSet(a, 3, words, Background(400), 11);
  const FinetuneSet z = BuildSet(a, 3, words, Background(400), 12);
  ASSERT_EQ(x.entries.size(), y.entries.size());
  bool differs = false;
  for (std::size_t i = 0; i < x.entries.size(); ++i) {
    EXPECT_EQ(x.entries[i].pair.id, y.entries[i].pair.id);
    EXPECT_EQ(x.entries[i].pair.target, y.entries[i].pair.target);
    EXPECT_EQ(x.entries[i].role, y.entries[i].role);
    differs |= !(x.entries[i].pair.target == z.entries[i].pair.target);
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(x.seed, y.seed);
  EXPECT_NE(x.seed, z.seed);
}

TEST(BuildSetTest, ReferencesAndHalfPicksArePrefixStable) {
  const auto words = Materials(3, 10, 19);
  const ApproachSpec a = ApproachSpec::Parse("half(20)");
  const ParallelCorpus filtered = Background(1000);
  const FinetuneSet small = BuildSet(a, 2, words, filtered, 4);
  const FinetuneSet large = BuildSet(a, 5, words, filtered, 4);
  for (const WordMaterial& w : words) {
    const auto refs_small = TargetsWithRole(small, Role::kReference, w.word);
    const auto refs_large = TargetsWithRole(large, Role::kReference, w.word);
    EXPECT_TRUE(std::includes(refs_large.begin(), refs_large.end(),
                              refs_small.begin(), refs_small.end()));
  }
  // Synthetics for reference r are picked identically at every step.
  std::map<PairId, std::multiset<std::string>> by_ref_small, by_ref_large;
  for (const SetEntry& e : small.entries) {
    if (e.role == Role::kSynthetic) by_ref_small[e.pair.id].insert(e.pair.target.ToString());
  }
  for (const SetEntry& e : large.entries) {
    if (e.role == Role::kSynthetic) by_ref_large[e.pair.id].insert(e.pair.target.ToString());
  }
  ASSERT_EQ(by_ref_small.size(), 6u);
  for (const auto& [id, picks] : by_ref_small) {
    EXPECT_EQ(picks.size(), 10u);
    EXPECT_EQ(by_ref_large[id], picks) << id;
  }
}

TEST(BuildSetTest, RejectsInsufficientMaterial) {
  const auto words = Materials(2, 2, 5);
  EXPECT_THROW(BuildSet(ApproachSpec::Parse("finetune"), 3, words,
                        Background(10), 1),
               DataError);
  EXPECT_THROW(BuildSet(ApproachSpec::Parse("augmented(20)"), 1, words,
                        Background(10), 1),
               DataError);
  EXPECT_THROW(BuildSet(ApproachSpec::Parse("randompad(20)"), 2, words,
                        Background(75), 1),
               DataError);
  EXPECT_NO_THROW(BuildSet(ApproachSpec::Parse("randompad(20)"), 2, words,
                           Background(76), 1));
  EXPECT_NO_THROW(BuildSet(ApproachSpec::Parse("augmented(6)"), 2, words,
                           Background(0), 1));
}

TEST(ScheduleRunsTest, OneSetPerCellApproachMajor) {
  const auto words = Materials(2, 20, 19);
  const std::vector<ApproachSpec> approaches = {
      ApproachSpec::Parse("finetune"), ApproachSpec::Parse("randompad(20)"),
      ApproachSpec::Parse("augmented(20)"), ApproachSpec::Parse("half(20)")};
  const OccurrenceSchedule schedule;
  const ParallelCorpus filtered = Background(2000);
  const auto sets = ScheduleRuns(schedule, approaches, words, filtered, 2, 1);
  ASSERT_EQ(sets.size(), 28u);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    EXPECT_EQ(sets[i].approach, approaches[i / 7]);
    EXPECT_EQ(sets[i].occurrences, schedule.steps[i % 7]);
    EXPECT_EQ(sets[i].n_ref, 2 * schedule.steps[i % 7]);
  }
  const auto threaded = ScheduleRuns(schedule, approaches, words, filtered, 2, 4);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    ASSERT_EQ(SetManifestJson(sets[i]), SetManifestJson(threaded[i]));
    for (std::size_t j = 0; j < sets[i].entries.size(); ++j) {
      ASSERT_EQ(sets[i].entries[j].pair.target, threaded[i].entries[j].pair.target);
    }
  }
}

TEST(TrainerDefaultsTest, MatchesReferenceSettings) {
  struct Row {
    const char* approach;
    std::size_t slow_epochs;
    double slow_lr;
    std::size_t fast_epochs;
    double fast_lr;
  };
  for (const Row& row : {Row{"finetune", 10, 4e-5, 30, 1e-4},
                         Row{"randompad(2)", 10, 4e-5, 30, 1e-4},
                         Row{"randompad(20)", 10, 1e-5, 30, 4e-5},
                         Row{"augmented(20)", 10, 4e-6, 10, 4e-5},
                         Row{"half(20)", 10, 4e-6, 10, 4e-5}}) {
    const TrainerDefaults d =
        DefaultTrainerSettings(ApproachSpec::Parse(row.approach));
    EXPECT_EQ(d.slow.epochs, row.slow_epochs) << row.approach;
    EXPECT_DOUBLE_EQ(d.slow.learning_rate, row.slow_lr) << row.approach;
    EXPECT_EQ(d.fast.epochs, row.fast_epochs) << row.approach;
    EXPECT_DOUBLE_EQ(d.fast.learning_rate, row.fast_lr) << row.approach;
  }
}

TEST(SetManifestTest, CarriesCountsAndDefaults) {
  const auto words = Materials(2, 2, 19);
  const FinetuneSet set =
      BuildSet(ApproachSpec::Parse("half(20)"), 2, words, Background(100), 8);
  const auto j = nlohmann::json::parse(SetManifestJson(set));
  EXPECT_EQ(j["approach"], "half(20)");
  EXPECT_EQ(j["kind"], "half");
  EXPECT_EQ(j["occurrences"], 2);
  EXPECT_EQ(j["n_ref"], 4);
  EXPECT_EQ(j["n_synth"], 40);
  EXPECT_EQ(j["n_rand"], 36);
  EXPECT_EQ(j["n_total"], 80);
  EXPECT_EQ(j["dedup_adjustments"], 0);
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), set.seed);
  EXPECT_EQ(j["files"][0], "half_20_2.src");
  EXPECT_EQ(j["per_word"]["w1"]["n_ref"], 2);
  EXPECT_EQ(j["per_word"]["w1"]["n_synth"], 20);
  EXPECT_EQ(j["per_word"]["w1"]["n_rand"], 18);
  EXPECT_EQ(j["trainer_defaults"]["fast"]["epochs"], 10);
}

}  // namespace
}  // namespace fewshot
