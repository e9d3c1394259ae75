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

#include "fewshot/sets.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <unordered_set>

#include "fewshot/error.h"
#include "fewshot/parallel.h"
#include "fewshot/rng.h"
#include "json.hpp"

namespace fewshot {

std::string_view ApproachKindName(ApproachKind kind) {
  switch (kind) {
    case ApproachKind::kFinetune:
      return "finetune";
    case ApproachKind::kRandomPad:
      return "randompad";
    case ApproachKind::kAugmented:
      return "augmented";
    case ApproachKind::kHalf:
      return "half";
  }
  return "finetune";
}

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kReference:
      return "reference";
    case Role::kSynthetic:
      return "synthetic";
    case Role::kRandom:
      return "random";
  }
  return "reference";
}

ApproachSpec ApproachSpec::Make(ApproachKind kind, std::size_t ratio) {
  ApproachSpec spec;
  spec.kind = kind;
  spec.ratio = ratio;
  const std::size_t companions = ratio > 0 ? ratio - 1 : 0;
  switch (kind) {
    case ApproachKind::kFinetune:
      break;
    case ApproachKind::kRandomPad:
      spec.rand_share = companions;
      break;
    case ApproachKind::kAugmented:
      spec.synth_share = companions;
      break;
    case ApproachKind::kHalf:
      spec.synth_share = (companions + 1) / 2;
      spec.rand_share = companions / 2;
      break;
  }
  spec.Validate();
  return spec;
}

ApproachSpec ApproachSpec::Parse(std::string_view text) {
  std::string_view name = text;
  std::size_t ratio = 0;
  const std::size_t open = text.find('(');
  if (open != std::string_view::npos) {
    if (!text.ends_with(")")) {
      throw ConfigError("malformed approach '" + std::string(text) + "'");
    }
    name = text.substr(0, open);
    const std::string_view digits = text.substr(open + 1, text.size() - open - 2);
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), ratio);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw ConfigError("malformed ratio in approach '" + std::string(text) + "'");
    }
  }
  for (ApproachKind kind : {ApproachKind::kFinetune, ApproachKind::kRandomPad,
                            ApproachKind::kAugmented, ApproachKind::kHalf}) {
    if (ApproachKindName(kind) != name) continue;
    if (kind == ApproachKind::kFinetune) {
      if (open != std::string_view::npos && ratio != 1) {
        throw ConfigError("finetune has ratio 1");
      }
      return Make(kind, 1);
    }
    if (open == std::string_view::npos) {
      throw ConfigError("approach '" + std::string(name) +
                        "' needs a ratio, e.g. " + std::string(name) + "(20)");
    }
    return Make(kind, ratio);
  }
  throw ConfigError("unknown approach '" + std::string(text) + "'");
}

void ApproachSpec::Validate() const {
  const std::string label = Label();
  if (ratio < 1 || 1 + synth_share + rand_share != ratio) {
    throw ConfigError(label + ": shares must satisfy 1 + synth + rand == ratio");
  }
  switch (kind) {
    case ApproachKind::kFinetune:
      if (ratio != 1) throw ConfigError(label + ": finetune requires ratio 1");
      break;
    case ApproachKind::kRandomPad:
      if (synth_share != 0 || rand_share == 0) {
        throw ConfigError(label + ": randompad needs random padding only");
      }
      break;
    case ApproachKind::kAugmented:
      if (rand_share != 0 || synth_share == 0) {
        throw ConfigError(label + ": augmented needs synthetic pairs only");
      }
      break;
    case ApproachKind::kHalf:
      if (synth_share == 0 || rand_share == 0) {
        throw ConfigError(label + ": half needs both synthetic and random pairs");
      }
      break;
  }
}

std::string ApproachSpec::Label() const {
  std::string label(ApproachKindName(kind));
  if (kind != ApproachKind::kFinetune) label += "(" + std::to_string(ratio) + ")";
  return label;
}

std::string ApproachSpec::FileStem(std::size_t c) const {
  return std::string(ApproachKindName(kind)) + "_" + std::to_string(ratio) +
         "_" + std::to_string(c);
}

void OccurrenceSchedule::Validate() const {
  if (steps.empty()) throw ConfigError("occurrence schedule is empty");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] == 0 || (i > 0 && steps[i] <= steps[i - 1])) {
      throw ConfigError("occurrence schedule must be positive and strictly "
                        "increasing");
    }
  }
}

FinetuneSet BuildSet(const ApproachSpec& approach, std::size_t c,
                     std::span<const WordMaterial> words,
                     const ParallelCorpus& filtered_training,
                     std::uint64_t seed) {
  approach.Validate();
  FinetuneSet set;
  set.approach = approach;
  set.occurrences = c;
  set.seed = Rng::Derive(seed, approach.FileStem(c));

  std::size_t random_needed = 0;
  for (const WordMaterial& w : words) {
    if (w.references.size() < c) {
      throw DataError("word '" + w.word + "' has " +
                      std::to_string(w.references.size()) +
                      " references, step needs " + std::to_string(c));
    }
    if (approach.synth_share > 0) {
      for (std::size_t r = 0; r < c; ++r) {
        const std::size_t have = r < w.synthetics.size() ? w.synthetics[r].size() : 0;
        if (have < approach.synth_share) {
          throw DataError("word '" + w.word + "' reference " +
                          std::to_string(r) + " has " + std::to_string(have) +
                          " synthetic pairs, " + approach.Label() + " needs " +
                          std::to_string(approach.synth_share));
        }
      }
    }
    random_needed += c * approach.rand_share;
  }
  if (random_needed > filtered_training.size()) {
    throw DataError(approach.Label() + " at step " + std::to_string(c) +
                    " needs " + std::to_string(random_needed) +
                    " random pairs but the filtered corpus has " +
                    std::to_string(filtered_training.size()));
  }

  Rng random_rng(Rng::Derive(set.seed, "random"));
  const std::vector<std::size_t> random_pool =
      random_rng.SampleIndices(filtered_training.size(), random_needed);
  std::size_t next_random = 0;

  std::unordered_set<PairId> seen_references;
  for (const WordMaterial& w : words) {
    for (std::size_t r = 0; r < c; ++r) {
      const SentencePair& ref = w.references[r];
      if (seen_references.insert(ref.id).second) {
        set.entries.push_back({ref, Role::kReference, w.word});
        ++set.n_ref;
      } else {
        ++set.dedup_adjustments;
      }
      if (approach.synth_share > 0) {
        const std::vector<SyntheticPair>& pool = w.synthetics[r];
        std::vector<std::size_t> picks;
        if (approach.kind == ApproachKind::kHalf) {
          // A random subset, stable across steps for a given reference.
          Rng pick_rng(Rng::Derive(Rng::Derive(seed, "half/" + w.word),
                                   static_cast<std::uint64_t>(r)));
          picks = pick_rng.SampleIndices(pool.size(), approach.synth_share);
          std::sort(picks.begin(), picks.end());
        } else {
          for (std::size_t i = 0; i < approach.synth_share; ++i) picks.push_back(i);
        }
        for (std::size_t i : picks) {
          set.entries.push_back({pool[i].pair, Role::kSynthetic, w.word});
          ++set.n_synth;
        }
      }
      for (std::size_t i = 0; i < approach.rand_share; ++i) {
        set.entries.push_back({filtered_training[random_pool[next_random++]],
                               Role::kRandom, w.word});
        ++set.n_rand;
      }
    }
  }
  Rng order_rng(Rng::Derive(set.seed, "order"));
  order_rng.Shuffle(set.entries);
  return set;
}

std::vector<FinetuneSet> ScheduleRuns(const OccurrenceSchedule& schedule,
                                      std::span<const ApproachSpec> approaches,
                                      std::span<const WordMaterial> words,
                                      const ParallelCorpus& filtered_training,
                                      std::uint64_t seed, int threads) {
  schedule.Validate();
  const std::size_t steps = schedule.steps.size();
  std::vector<FinetuneSet> sets(approaches.size() * steps);
  ParallelFor(sets.size(), threads, [&](std::size_t cell) {
    sets[cell] = BuildSet(approaches[cell / steps],
                          schedule.steps[cell % steps], words,
                          filtered_training, seed);
  });
  return sets;
}

TrainerDefaults DefaultTrainerSettings(const ApproachSpec& approach) {
  switch (approach.kind) {
    case ApproachKind::kFinetune:
      return {{10, 4e-5}, {30, 1e-4}};
    case ApproachKind::kRandomPad:
      if (approach.ratio >= 20) return {{10, 1e-5}, {30, 4e-5}};
      return {{10, 4e-5}, {30, 1e-4}};
    case ApproachKind::kAugmented:
    case ApproachKind::kHalf:
      return {{10, 4e-6}, {10, 4e-5}};
  }
  return {};
}

std::string SetManifestJson(const FinetuneSet& set) {
  const TrainerDefaults defaults = DefaultTrainerSettings(set.approach);
  nlohmann::ordered_json out;
  out["approach"] = set.approach.Label();
  out["kind"] = std::string(ApproachKindName(set.approach.kind));
  out["ratio"] = set.approach.ratio;
  out["synth_share"] = set.approach.synth_share;
  out["rand_share"] = set.approach.rand_share;
  out["occurrences"] = set.occurrences;
  out["n_ref"] = set.n_ref;
  out["n_synth"] = set.n_synth;
  out["n_rand"] = set.n_rand;
  out["n_total"] = set.n_total();
  out["dedup_adjustments"] = set.dedup_adjustments;
  out["seed"] = set.seed;
  std::map<Token, std::array<std::size_t, 3>> per_word;
  for (const SetEntry& e : set.entries) {
    ++per_word[e.word][static_cast<std::size_t>(e.role)];
  }
  nlohmann::ordered_json words = nlohmann::ordered_json::object();
  for (const auto& [word, counts] : per_word) {
    words[word] = {{"n_ref", counts[0]}, {"n_synth", counts[1]},
                   {"n_rand", counts[2]}};
  }
  out["per_word"] = std::move(words);
  out["files"] = {set.approach.FileStem(set.occurrences) + ".src",
                  set.approach.FileStem(set.occurrences) + ".tgt"};
  out["trainer_defaults"] = {
      {"slow", {{"epochs", defaults.slow.epochs},
                {"learning_rate", defaults.slow.learning_rate}}},
      {"fast", {{"epochs", defaults.fast.epochs},
                {"learning_rate", defaults.fast.learning_rate}}}};
  return out.dump(2) + "\n";
}

}  // namespace fewshot
