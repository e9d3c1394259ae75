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

#include "fewshot/metrics.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "fewshot/error.h"
#include "fewshot/text_io.h"
#include "json.hpp"

namespace fewshot {

EvalCorpus EvalCorpus::Load(const std::filesystem::path& hypotheses,
                            const std::filesystem::path& references,
                            bool lowercase) {
  const std::vector<std::string> hyp = ReadLines(hypotheses);
  const std::vector<std::string> ref = ReadLines(references);
  if (hyp.size() != ref.size()) {
    throw DataError("line count mismatch: " + hypotheses.string() + " has " +
                    std::to_string(hyp.size()) + " lines, " +
                    references.string() + " has " + std::to_string(ref.size()));
  }
  EvalCorpus corpus;
  corpus.hypotheses.reserve(hyp.size());
  corpus.references.reserve(ref.size());
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    corpus.hypotheses.emplace_back(
        SplitWhitespace(lowercase ? AsciiLower(hyp[i]) : hyp[i]));
    std::vector<Token> r = SplitWhitespace(lowercase ? AsciiLower(ref[i]) : ref[i]);
    if (r.empty()) {
      throw DataError(references.string() + ":" + std::to_string(i + 1) +
                      ": empty reference line");
    }
    corpus.references.emplace_back(std::move(r));
  }
  return corpus;
}

std::string_view AveragingName(Averaging averaging) {
  return averaging == Averaging::kMicro ? "micro" : "macro";
}

Averaging ParseAveraging(std::string_view name) {
  if (name == "micro") return Averaging::kMicro;
  if (name == "macro") return Averaging::kMacro;
  throw ConfigError("unknown averaging '" + std::string(name) +
                    "' (expected micro or macro)");
}

WordScore ScoreWord(const EvalCorpus& corpus, std::string_view word,
                    Averaging averaging) {
  if (corpus.hypotheses.size() != corpus.references.size()) {
    throw DataError("hypothesis and reference counts differ");
  }
  WordScore score;
  score.word = std::string(word);
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::size_t n = corpus.references[i].Count(word);
    const std::size_t p = corpus.hypotheses[i].Count(word);
    score.n_total += n;
    score.p_total += p;
    score.clipped += std::min(p, n);
    score.excess += p > n ? p - n : 0;
    if (n > 0) {
      ++score.sentences;
      ratio_sum += static_cast<double>(std::min(p, n)) / static_cast<double>(n);
    }
  }
  if (score.n_total == 0) {
    throw DataError("accuracy undefined: '" + std::string(word) +
                    "' occurs in no reference sentence");
  }
  score.accuracy =
      averaging == Averaging::kMicro
          ? static_cast<double>(score.clipped) / static_cast<double>(score.n_total)
          : ratio_sum / static_cast<double>(score.sentences);
  score.overtranslation =
      static_cast<double>(score.excess) / static_cast<double>(score.n_total);
  return score;
}

double WordAccuracy(const EvalCorpus& corpus, std::string_view word,
                    Averaging averaging) {
  return ScoreWord(corpus, word, averaging).accuracy;
}

double OverallAccuracy(const EvalCorpus& corpus, std::span<const Token> words,
                       Averaging averaging) {
  if (words.empty()) throw DataError("no evaluation words to score");
  double sum = 0.0;
  for (const Token& w : words) sum += WordAccuracy(corpus, w, averaging);
  return sum / static_cast<double>(words.size());
}

double OverTranslation(const EvalCorpus& corpus, std::string_view word) {
  return ScoreWord(corpus, word).overtranslation;
}

double OverallOverTranslation(const EvalCorpus& corpus,
                              std::span<const Token> words) {
  if (words.empty()) throw DataError("no evaluation words to score");
  double sum = 0.0;
  for (const Token& w : words) sum += OverTranslation(corpus, w);
  return sum / static_cast<double>(words.size());
}

namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts CountNgrams(const Sentence& s, std::size_t n) {
  NgramCounts counts;
  if (s.size() < n) return counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) {
      if (k) key.push_back('\x1f');
      key += s[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

BleuScore CorpusBleu(const EvalCorpus& corpus, std::size_t max_n) {
  if (corpus.size() == 0) throw DataError("BLEU of an empty corpus");
  if (corpus.hypotheses.size() != corpus.references.size()) {
    throw DataError("hypothesis and reference counts differ");
  }
  if (max_n < 1) throw ConfigError("BLEU order must be >= 1");
  BleuScore score;
  score.matches.assign(max_n, 0);
  score.totals.assign(max_n, 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Sentence& hyp = corpus.hypotheses[i];
    const Sentence& ref = corpus.references[i];
    score.hypothesis_length += hyp.size();
    score.reference_length += ref.size();
    for (std::size_t n = 1; n <= max_n; ++n) {
      const NgramCounts h = CountNgrams(hyp, n);
      const NgramCounts r = CountNgrams(ref, n);
      for (const auto& [gram, count] : h) {
        score.totals[n - 1] += count;
        auto it = r.find(gram);
        if (it != r.end()) score.matches[n - 1] += std::min(count, it->second);
      }
    }
  }
  if (score.hypothesis_length == 0) return score;
  score.brevity_penalty =
      score.hypothesis_length < score.reference_length
          ? std::exp(1.0 - static_cast<double>(score.reference_length) /
                               static_cast<double>(score.hypothesis_length))
          : 1.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    if (score.matches[n] == 0) return score;
    log_sum += std::log(static_cast<double>(score.matches[n]) /
                        static_cast<double>(score.totals[n]));
  }
  score.bleu = 100.0 * score.brevity_penalty *
               std::exp(log_sum / static_cast<double>(max_n));
  return score;
}

ScoreReport Evaluate(const EvalCorpus& corpus, std::span<const Token> words,
                     std::string label, Averaging averaging) {
  if (words.empty()) throw DataError("no evaluation words to score");
  ScoreReport report;
  report.label = std::move(label);
  report.averaging = averaging;
  report.bleu = CorpusBleu(corpus);
  double accuracy = 0.0;
  double overtranslation = 0.0;
  for (const Token& w : words) {
    report.per_word.push_back(ScoreWord(corpus, w, averaging));
    accuracy += report.per_word.back().accuracy;
    overtranslation += report.per_word.back().overtranslation;
  }
  report.overall_accuracy = accuracy / static_cast<double>(words.size());
  report.overall_overtranslation =
      overtranslation / static_cast<double>(words.size());
  return report;
}

std::string ScoreReport::ToJson() const {
  nlohmann::ordered_json out;
  out["label"] = label;
  out["accuracy_averaging"] = std::string(AveragingName(averaging));
  out["overall_bleu"] = bleu.bleu;
  out["overall_accuracy"] = overall_accuracy;
  out["overall_overtranslation"] = overall_overtranslation;
  out["bleu_detail"] = {{"matches", bleu.matches},
                        {"totals", bleu.totals},
                        {"hypothesis_length", bleu.hypothesis_length},
                        {"reference_length", bleu.reference_length},
                        {"brevity_penalty", bleu.brevity_penalty}};
  nlohmann::ordered_json words = nlohmann::ordered_json::array();
  for (const WordScore& w : per_word) {
    words.push_back({{"word", w.word},
                     {"n", w.n_total},
                     {"p", w.p_total},
                     {"clipped", w.clipped},
                     {"excess", w.excess},
                     {"sentences", w.sentences},
                     {"accuracy", w.accuracy},
                     {"overtranslation", w.overtranslation}});
  }
  out["per_word"] = std::move(words);
  return out.dump(2) + "\n";
}

}  // namespace fewshot
