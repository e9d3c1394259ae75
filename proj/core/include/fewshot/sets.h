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

// Fine-tuning set construction for the four adaptation approaches.
//
// A set for occurrence count c holds, per evaluation word, its first c
// reference pairs plus companions: synth_share synthetic pairs and
// rand_share random filtered-training pairs per reference, so that
//
//   n_total = n_ref + n_synth + n_rand,   n_total / n_ref = ratio
//
// before shared references are deduplicated.

#ifndef FEWSHOT_SETS_H_
#define FEWSHOT_SETS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fewshot/augment.h"
#include "fewshot/corpus.h"

namespace fewshot {

enum class ApproachKind { kFinetune, kRandomPad, kAugmented, kHalf };

std::string_view ApproachKindName(ApproachKind kind);

struct ApproachSpec {
  ApproachKind kind = ApproachKind::kFinetune;
  std::size_t ratio = 1;
  std::size_t synth_share = 0;
  std::size_t rand_share = 0;

  // Derives the shares from the ratio. half splits the ratio - 1 companions
  // with the extra one going to the synthetic side (half(20) = 10 + 9).
  static ApproachSpec Make(ApproachKind kind, std::size_t ratio);
  // "finetune", "randompad(2)", "augmented(20)", "half(20)".
  static ApproachSpec Parse(std::string_view text);

  // Throws ConfigError when the shares break the approach's definition.
  void Validate() const;

  std::string Label() const;                  // "half(20)"
  std::string FileStem(std::size_t c) const;  // "half_20_3"

  friend bool operator==(const ApproachSpec&, const ApproachSpec&) = default;
};

struct OccurrenceSchedule {
  std::vector<std::size_t> steps = {1, 2, 3, 5, 10, 15, 20};

  // Strictly increasing and positive.
  void Validate() const;
};

enum class Role { kReference, kSynthetic, kRandom };

std::string_view RoleName(Role role);

struct SetEntry {
  SentencePair pair;
  Role role = Role::kReference;
  Token word;  // evaluation word the entry was added for
};

// Everything set construction needs to know about one evaluation word.
struct WordMaterial {
  Token word;
  // Sampled references, in sampling order.
  std::vector<SentencePair> references;
  // synthetics[i] belongs to references[i], in rank order.
  std::vector<std::vector<SyntheticPair>> synthetics;
};

struct FinetuneSet {
  ApproachSpec approach;
  std::size_t occurrences = 0;
  std::uint64_t seed = 0;
  std::vector<SetEntry> entries;  // seeded shuffle of all roles
  std::size_t n_ref = 0;
  std::size_t n_synth = 0;
  std::size_t n_rand = 0;
  // References skipped because another word already contributed them.
  std::size_t dedup_adjustments = 0;

  std::size_t n_total() const { return n_ref + n_synth + n_rand; }
};

// Builds one set over all words. Throws DataError when a word has fewer
// than c references or a reference lacks synth_share synthetics, or when
// the filtered corpus cannot supply enough random pairs.
FinetuneSet BuildSet(const ApproachSpec& approach, std::size_t c,
                     std::span<const WordMaterial> words,
                     const ParallelCorpus& filtered_training,
                     std::uint64_t seed);

// One set per (approach, step), approach-major.
std::vector<FinetuneSet> ScheduleRuns(const OccurrenceSchedule& schedule,
                                      std::span<const ApproachSpec> approaches,
                                      std::span<const WordMaterial> words,
                                      const ParallelCorpus& filtered_training,
                                      std::uint64_t seed, int threads = 1);

struct TrainerSetting {
  std::size_t epochs = 0;
  double learning_rate = 0.0;
};

// Suggested slow / fast fine-tuning settings for the external trainer.
struct TrainerDefaults {
  TrainerSetting slow;
  TrainerSetting fast;
};
TrainerDefaults DefaultTrainerSettings(const ApproachSpec& approach);

// Manifest JSON: role counts overall and per word, seed, dedup adjustments
// and trainer defaults.
std::string SetManifestJson(const FinetuneSet& set);

}  // namespace fewshot

#endif  // FEWSHOT_SETS_H_
