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

#include "fewshot/wordselect.h"

#include <algorithm>
#include <unordered_map>

#include "fewshot/error.h"
#include "fewshot/rng.h"
#include "fewshot/text_io.h"
#include "json.hpp"

namespace fewshot {

void SelectionCriteria::Validate() const {
  if (min_test_count < 1 || min_train_count < 1 || max_words < 1) {
    throw ConfigError(
        "selection thresholds must be >= 1 (min_test_count=" +
        std::to_string(min_test_count) +
        ", min_train_count=" + std::to_string(min_train_count) +
        ", max_words=" + std::to_string(max_words) + ")");
  }
}

std::vector<EvaluationWord> SelectWords(const ParallelCorpus& train,
                                        const ParallelCorpus& test,
                                        const SelectionCriteria& criteria) {
  criteria.Validate();
  const FrequencyTable& train_freq = train.frequencies(Side::kTarget);
  const FrequencyTable& test_freq = test.frequencies(Side::kTarget);

  std::vector<EvaluationWord> candidates;
  for (const auto& [word, unused] : train_freq.token_counts()) {
    const std::size_t train_count = train_freq.Count(word, criteria.count_unit);
    if (train_count < criteria.min_train_count) continue;
    const std::size_t test_count = test_freq.Count(word, criteria.count_unit);
    if (test_count < criteria.min_test_count) continue;
    candidates.push_back({word, std::nullopt, train_count, test_count, {}});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const EvaluationWord& a, const EvaluationWord& b) {
              if (a.train_count != b.train_count) {
                return a.train_count < b.train_count;
              }
              return a.target_word < b.target_word;
            });
  if (candidates.size() > criteria.max_words) {
    candidates.resize(criteria.max_words);
  }
  std::erase_if(candidates, [&](const EvaluationWord& w) {
    return criteria.exclusion_list.count(w.target_word) > 0;
  });
  if (candidates.empty()) {
    throw DataError(
        "no evaluation word qualifies (need >= " +
        std::to_string(criteria.min_train_count) + " training and >= " +
        std::to_string(criteria.min_test_count) + " test occurrences, " +
        std::to_string(criteria.exclusion_list.size()) + " words excluded)");
  }
  return candidates;
}

FilteredSplit SplitCorpus(const ParallelCorpus& train,
                          std::vector<EvaluationWord> words) {
  std::unordered_map<std::string_view, std::size_t> word_index;
  for (std::size_t i = 0; i < words.size(); ++i) {
    words[i].held_out.clear();
    word_index.emplace(words[i].target_word, i);
  }

  FilteredSplit split;
  for (const EvaluationWord& w : words) split.held_out_pool[w.target_word];
  std::vector<SentencePair> kept;
  kept.reserve(train.size());
  std::vector<std::size_t> hits;
  for (const SentencePair& pair : train.pairs()) {
    hits.clear();
    for (const Token& t : pair.target.tokens()) {
      auto it = word_index.find(t);
      if (it != word_index.end() &&
          std::find(hits.begin(), hits.end(), it->second) == hits.end()) {
        hits.push_back(it->second);
      }
    }
    if (hits.empty()) {
      kept.push_back(pair);
      continue;
    }
    ++split.held_out_pairs;
    std::sort(hits.begin(), hits.end());
    for (std::size_t w : hits) {
      words[w].held_out.push_back(pair.id);
      split.held_out_pool[words[w].target_word].push_back(pair);
    }
  }
  split.filtered_training = ParallelCorpus(std::move(kept));
  split.evaluation_words = std::move(words);
  return split;
}

std::vector<SentencePair> SampleReferences(std::span<const SentencePair> pool,
                                           std::size_t n, std::uint64_t seed) {
  if (pool.size() < n) {
    throw DataError("cannot sample " + std::to_string(n) +
                    " references from a pool of " +
                    std::to_string(pool.size()));
  }
  Rng rng(seed);
  std::vector<SentencePair> out;
  out.reserve(n);
  for (std::size_t i : rng.SampleIndices(pool.size(), n)) {
    out.push_back(pool[i]);
  }
  return out;
}

std::set<Token> LoadWordList(const std::filesystem::path& path) {
  std::set<Token> words;
  for (const std::string& line : ReadLines(path)) {
    for (std::string& w : SplitWhitespace(line)) words.insert(std::move(w));
  }
  return words;
}

std::string EvaluationWordsToJson(std::span<const EvaluationWord> words) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const EvaluationWord& w : words) {
    nlohmann::ordered_json entry;
    entry["word"] = w.target_word;
    entry["source_word"] =
        w.source_word ? nlohmann::ordered_json(*w.source_word) : nullptr;
    entry["train_count"] = w.train_count;
    entry["test_count"] = w.test_count;
    entry["held_out_ids"] = w.held_out;
    out.push_back(std::move(entry));
  }
  return out.dump(2) + "\n";
}

std::vector<EvaluationWord> EvaluationWordsFromJson(std::string_view json) {
  std::vector<EvaluationWord> words;
  try {
    const nlohmann::json parsed = nlohmann::json::parse(json);
    for (const auto& entry : parsed) {
      EvaluationWord w;
      w.target_word = entry.at("word").get<std::string>();
      if (!entry.at("source_word").is_null()) {
        w.source_word = entry.at("source_word").get<std::string>();
      }
      w.train_count = entry.at("train_count").get<std::size_t>();
      w.test_count = entry.at("test_count").get<std::size_t>();
      w.held_out = entry.at("held_out_ids").get<std::vector<PairId>>();
      words.push_back(std::move(w));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed evaluation-word report: ") +
                    e.what());
  }
  return words;
}

}  // namespace fewshot
