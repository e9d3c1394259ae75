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

// Scores for hypothesis translations: clipped word accuracy,
// over-translation and corpus BLEU. Every score carries its integer
// numerator and denominator.

#ifndef FEWSHOT_METRICS_H_
#define FEWSHOT_METRICS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fewshot/corpus.h"

namespace fewshot {

struct EvalCorpus {
  std::vector<Sentence> hypotheses;
  std::vector<Sentence> references;

  std::size_t size() const { return references.size(); }

  // Hypothesis lines may be empty; reference lines may not. Throws
  // DataError on a line-count mismatch.
  static EvalCorpus Load(const std::filesystem::path& hypotheses,
                         const std::filesystem::path& references,
                         bool lowercase = false);
};

// Micro sums clipped counts over sentences before dividing; macro averages
// the per-sentence ratios of sentences whose reference contains the word.
enum class Averaging { kMicro, kMacro };

std::string_view AveragingName(Averaging averaging);
Averaging ParseAveraging(std::string_view name);

struct WordScore {
  Token word;
  std::size_t n_total = 0;   // sum of reference counts n_i
  std::size_t p_total = 0;   // sum of hypothesis counts p_i
  std::size_t clipped = 0;   // sum of min(p_i, n_i)
  std::size_t excess = 0;    // sum of max(p_i - n_i, 0)
  std::size_t sentences = 0; // sentences with n_i > 0
  double accuracy = 0.0;
  double overtranslation = 0.0;
};

// Throws DataError if no reference contains the word.
WordScore ScoreWord(const EvalCorpus& corpus, std::string_view word,
                    Averaging averaging = Averaging::kMicro);

double WordAccuracy(const EvalCorpus& corpus, std::string_view word,
                    Averaging averaging = Averaging::kMicro);
double OverallAccuracy(const EvalCorpus& corpus, std::span<const Token> words,
                       Averaging averaging = Averaging::kMicro);
double OverTranslation(const EvalCorpus& corpus, std::string_view word);
double OverallOverTranslation(const EvalCorpus& corpus,
                              std::span<const Token> words);

struct BleuScore {
  double bleu = 0.0;  // 0..100
  std::vector<std::size_t> matches;  // clipped n-gram matches, n = 1..max_n
  std::vector<std::size_t> totals;   // hypothesis n-grams, n = 1..max_n
  std::size_t hypothesis_length = 0;
  std::size_t reference_length = 0;
  double brevity_penalty = 0.0;
};

// Corpus-level BLEU on tokenized text, no smoothing: any zero precision
// gives 0. Throws DataError on an empty corpus.
BleuScore CorpusBleu(const EvalCorpus& corpus, std::size_t max_n = 4);

struct ScoreReport {
  std::string label;
  Averaging averaging = Averaging::kMicro;
  BleuScore bleu;
  double overall_accuracy = 0.0;
  double overall_overtranslation = 0.0;
  std::vector<WordScore> per_word;

  std::string ToJson() const;
};

ScoreReport Evaluate(const EvalCorpus& corpus, std::span<const Token> words,
                     std::string label, Averaging averaging = Averaging::kMicro);

}  // namespace fewshot

#endif  // FEWSHOT_METRICS_H_
