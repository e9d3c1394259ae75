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

#include "fewshot/aligner.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "fewshot/error.h"
#include "fewshot/parallel.h"
#include "fewshot/text_io.h"
#include "json.hpp"

namespace fewshot {

void AlignerOptions::Validate() const {
  if (iterations < 1) throw ConfigError("aligner iterations must be >= 1");
  if (diagonal) {
    if (!(diagonal->tension >= 0.0)) {
      throw ConfigError("diagonal tension must be non-negative");
    }
    if (!(diagonal->null_probability > 0.0 &&
          diagonal->null_probability < 1.0)) {
      throw ConfigError("diagonal null probability must be in (0, 1)");
    }
  }
}

// ---------------------------------------------------------------------------
// TranslationTable

std::uint32_t TranslationTable::InternSource(std::string_view token) {
  auto [it, inserted] = source_ids_.emplace(
      std::string(token), static_cast<std::uint32_t>(source_vocab_.size()));
  if (inserted) source_vocab_.emplace_back(token);
  return it->second;
}

std::uint32_t TranslationTable::InternTarget(std::string_view token) {
  auto [it, inserted] = target_ids_.emplace(
      std::string(token), static_cast<std::uint32_t>(target_vocab_.size()));
  if (inserted) target_vocab_.emplace_back(token);
  return it->second;
}

std::optional<std::uint32_t> TranslationTable::SourceId(
    std::string_view token) const {
  auto it = source_ids_.find(std::string(token));
  if (it == source_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> TranslationTable::TargetId(
    std::string_view token) const {
  auto it = target_ids_.find(std::string(token));
  if (it == target_ids_.end()) return std::nullopt;
  return it->second;
}

double TranslationTable::Smoothed(std::optional<std::uint32_t> s,
                                  std::uint32_t t) const {
  if (!s) return kUnseenProbability;
  auto it = slot_of_.find(Key(*s, t));
  if (it == slot_of_.end()) return kUnseenProbability;
  return probs_[it->second];
}

TranslationTable TranslationTable::Uniform(const ParallelCorpus& corpus) {
  TranslationTable table;
  table.InternSource(kNullToken);
  for (const SentencePair& p : corpus.pairs()) {
    for (const Token& t : p.target.tokens()) table.InternTarget(t);
  }
  const double init = 1.0 / static_cast<double>(table.target_vocab_.size());
  std::vector<std::uint32_t> src;
  for (const SentencePair& p : corpus.pairs()) {
    src.assign(1, 0);
    for (const Token& s : p.source.tokens()) src.push_back(table.InternSource(s));
    for (const Token& t : p.target.tokens()) {
      const std::uint32_t tid = *table.TargetId(t);
      for (std::uint32_t sid : src) {
        const std::uint64_t key = Key(sid, tid);
        if (table.slot_of_.emplace(key, table.slots_.size()).second) {
          table.slots_.emplace_back(sid, tid);
          table.probs_.push_back(init);
        }
      }
    }
  }
  return table;
}

double TranslationTable::Prob(std::string_view source,
                              std::string_view target) const {
  const auto s = SourceId(source);
  const auto t = TargetId(target);
  if (!s || !t) return 0.0;
  auto it = slot_of_.find(Key(*s, *t));
  return it == slot_of_.end() ? 0.0 : probs_[it->second];
}

bool TranslationTable::KnowsTarget(std::string_view target) const {
  return TargetId(target).has_value();
}

std::vector<TranslationTable::Entry> TranslationTable::Entries() const {
  std::vector<std::size_t> order(slots_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return slots_[a] < slots_[b];
  });
  std::vector<Entry> entries;
  entries.reserve(order.size());
  for (std::size_t i : order) {
    entries.push_back({source_vocab_[slots_[i].first],
                       target_vocab_[slots_[i].second], probs_[i]});
  }
  return entries;
}

std::map<std::string, double> TranslationTable::RowSums() const {
  std::vector<double> sums(source_vocab_.size(), 0.0);
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    sums[slots_[i].first] += probs_[i];
  }
  std::map<std::string, double> out;
  for (std::size_t s = 0; s < sums.size(); ++s) {
    if (sums[s] > 0.0) out[source_vocab_[s]] = sums[s];
  }
  return out;
}

std::string TranslationTable::ToTsv() const {
  std::string out;
  for (const Entry& e : Entries()) {
    out += e.source;
    out += '\t';
    out += e.target;
    out += '\t';
    out += FormatDouble(e.prob);
    out += '\n';
  }
  return out;
}

TranslationTable TranslationTable::FromTsv(std::string_view tsv) {
  TranslationTable table;
  table.InternSource(kNullToken);
  std::size_t line_no = 0;
  while (!tsv.empty()) {
    ++line_no;
    std::size_t end = tsv.find('\n');
    std::string_view line = tsv.substr(0, end);
    tsv = end == std::string_view::npos ? std::string_view() : tsv.substr(end + 1);
    if (line.empty()) continue;
    const std::size_t a = line.find('\t');
    const std::size_t b =
        a == std::string_view::npos ? a : line.find('\t', a + 1);
    if (b == std::string_view::npos) {
      throw DataError("translation table line " + std::to_string(line_no) +
                      ": expected source<TAB>target<TAB>prob");
    }
    double prob = 0.0;
    const std::string_view num = line.substr(b + 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), prob);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw DataError("translation table line " + std::to_string(line_no) +
                      ": bad probability '" + std::string(num) + "'");
    }
    const std::uint32_t s = table.InternSource(line.substr(0, a));
    const std::uint32_t t = table.InternTarget(line.substr(a + 1, b - a - 1));
    if (table.slot_of_.emplace(Key(s, t), table.slots_.size()).second) {
      table.slots_.emplace_back(s, t);
      table.probs_.push_back(prob);
    } else {
      table.probs_[table.slot_of_[Key(s, t)]] = prob;
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Distortion

namespace {

// Priors for one target position: [NULL, source 0, source 1, ...].
void FillPriors(const std::optional<DiagonalPrior>& diagonal, std::size_t j,
                std::size_t source_len, std::size_t target_len,
                std::vector<double>& out) {
  out.resize(source_len + 1);
  if (!diagonal) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(source_len + 1));
    return;
  }
  out[0] = diagonal->null_probability;
  double z = 0.0;
  for (std::size_t i = 0; i < source_len; ++i) {
    out[i + 1] = std::exp(
        diagonal->tension *
        -std::abs(static_cast<double>(i + 1) / static_cast<double>(source_len) -
                  static_cast<double>(j + 1) / static_cast<double>(target_len)));
    z += out[i + 1];
  }
  for (std::size_t i = 0; i < source_len; ++i) {
    out[i + 1] *= (1.0 - diagonal->null_probability) / z;
  }
}

}  // namespace

double AlignmentPrior(const std::optional<DiagonalPrior>& diagonal,
                      std::optional<std::size_t> i, std::size_t j,
                      std::size_t source_len, std::size_t target_len) {
  std::vector<double> priors;
  FillPriors(diagonal, j, source_len, target_len, priors);
  return priors[i ? *i + 1 : 0];
}

std::vector<std::vector<double>> AlignmentPosteriors(
    const SentencePair& pair, const TranslationTable& table) {
  const std::size_t l = pair.source.size();
  const std::size_t m = pair.target.size();
  std::vector<std::optional<std::uint32_t>> src(l + 1);
  src[0] = 0;
  for (std::size_t i = 0; i < l; ++i) src[i + 1] = table.SourceId(pair.source[i]);
  std::vector<std::vector<double>> post(m, std::vector<double>(l + 1, 0.0));
  std::vector<double> priors;
  for (std::size_t j = 0; j < m; ++j) {
    const auto t = table.TargetId(pair.target[j]);
    FillPriors(table.diagonal(), j, l, m, priors);
    double total = 0.0;
    for (std::size_t i = 0; i <= l; ++i) {
      post[j][i] = (t ? table.Smoothed(src[i], *t) : kUnseenProbability) *
                   priors[i];
      total += post[j][i];
    }
    for (double& x : post[j]) x /= total;
  }
  return post;
}

// ---------------------------------------------------------------------------
// EM

class ModelOneTrainer {
 public:
  ModelOneTrainer(const ParallelCorpus& corpus, const AlignerOptions& options)
      : options_(options), table_(TranslationTable::Uniform(corpus)) {
    table_.set_diagonal(options.diagonal);
    encoded_.reserve(corpus.size());
    for (const SentencePair& p : corpus.pairs()) {
      EncodedPair e;
      e.src.reserve(p.source.size());
      for (const Token& s : p.source.tokens()) e.src.push_back(*table_.SourceId(s));
      e.tgt.reserve(p.target.size());
      for (const Token& t : p.target.tokens()) e.tgt.push_back(*table_.TargetId(t));
      encoded_.push_back(std::move(e));
    }
  }

  TrainResult Run() {
    TrainResult result;
    std::vector<double> counts;
    for (std::size_t it = 0; it < options_.iterations; ++it) {
      result.log_likelihood.push_back(Expectation(&counts));
      Maximize(counts);
    }
    result.log_likelihood.push_back(Expectation(nullptr));
    result.table = std::move(table_);
    return result;
  }

 private:
  struct EncodedPair {
    std::vector<std::uint32_t> src;
    std::vector<std::uint32_t> tgt;
  };

  struct BlockOutput {
    std::vector<std::pair<std::uint32_t, double>> contributions;
    double log_likelihood = 0.0;
  };

  static constexpr std::size_t kBlockSize = 256;

  void ProcessBlock(std::size_t block, bool want_counts, BlockOutput& out) const {
    out.contributions.clear();
    out.log_likelihood = 0.0;
    const std::size_t begin = block * kBlockSize;
    const std::size_t end = std::min(encoded_.size(), begin + kBlockSize);
    std::vector<double> priors;
    std::vector<std::uint32_t> slots;
    std::vector<double> scores;
    for (std::size_t p = begin; p < end; ++p) {
      const EncodedPair& e = encoded_[p];
      const std::size_t l = e.src.size();
      const std::size_t m = e.tgt.size();
      for (std::size_t j = 0; j < m; ++j) {
        FillPriors(table_.diagonal(), j, l, m, priors);
        slots.resize(l + 1);
        scores.resize(l + 1);
        slots[0] = table_.slot_of_.at(TranslationTable::Key(0, e.tgt[j]));
        for (std::size_t i = 0; i < l; ++i) {
          slots[i + 1] =
              table_.slot_of_.at(TranslationTable::Key(e.src[i], e.tgt[j]));
        }
        double total = 0.0;
        for (std::size_t i = 0; i <= l; ++i) {
          scores[i] = table_.probs_[slots[i]] * priors[i];
          total += scores[i];
        }
        out.log_likelihood += std::log(total);
        if (!want_counts) continue;
        for (std::size_t i = 0; i <= l; ++i) {
          out.contributions.emplace_back(slots[i], scores[i] / total);
        }
      }
    }
  }

  // Returns the log-likelihood under the current table. Reduction happens
  // block by block in corpus order, so results do not depend on `threads`.
  double Expectation(std::vector<double>* counts) {
    if (counts) counts->assign(table_.probs_.size(), 0.0);
    const std::size_t blocks = (encoded_.size() + kBlockSize - 1) / kBlockSize;
    const std::size_t wave =
        static_cast<std::size_t>(std::max(1, options_.threads));
    std::vector<BlockOutput> outputs(wave);
    double log_likelihood = 0.0;
    for (std::size_t first = 0; first < blocks; first += wave) {
      const std::size_t n = std::min(wave, blocks - first);
      ParallelFor(n, options_.threads, [&](std::size_t b) {
        ProcessBlock(first + b, counts != nullptr, outputs[b]);
      });
      for (std::size_t b = 0; b < n; ++b) {
        log_likelihood += outputs[b].log_likelihood;
        if (!counts) continue;
        for (const auto& [slot, value] : outputs[b].contributions) {
          (*counts)[slot] += value;
        }
      }
    }
    return log_likelihood;
  }

  void Maximize(const std::vector<double>& counts) {
    std::vector<double> row(table_.source_vocab_.size(), 0.0);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      row[table_.slots_[k].first] += counts[k];
    }
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const double total = row[table_.slots_[k].first];
      table_.probs_[k] = total > 0.0 ? counts[k] / total : 0.0;
    }
  }

  AlignerOptions options_;
  TranslationTable table_;
  std::vector<EncodedPair> encoded_;
};

TrainResult TrainAligner(const ParallelCorpus& corpus,
                         const AlignerOptions& options) {
  options.Validate();
  if (corpus.empty()) throw DataError("cannot train an aligner on an empty corpus");
  return ModelOneTrainer(corpus, options).Run();
}

// ---------------------------------------------------------------------------
// Viterbi alignment

std::vector<std::size_t> Alignment::SourcesFor(std::size_t target_index) const {
  std::vector<std::size_t> sources;
  for (const auto& [i, j] : links) {
    if (j == target_index) sources.push_back(i);
  }
  std::sort(sources.begin(), sources.end());
  return sources;
}

std::string Alignment::ToPharaoh() const {
  std::string out;
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(links[k].first) + '-' + std::to_string(links[k].second);
  }
  return out;
}

Alignment Alignment::FromPharaoh(std::string_view line, PairId pair_id) {
  Alignment a;
  a.pair_id = pair_id;
  for (const std::string& link : SplitWhitespace(line)) {
    const std::size_t dash = link.find('-');
    std::size_t i = 0;
    std::size_t j = 0;
    bool ok = dash != std::string::npos && dash > 0 && dash + 1 < link.size();
    if (ok) {
      auto r1 = std::from_chars(link.data(), link.data() + dash, i);
      auto r2 = std::from_chars(link.data() + dash + 1,
                                link.data() + link.size(), j);
      ok = r1.ec == std::errc() && r1.ptr == link.data() + dash &&
           r2.ec == std::errc() && r2.ptr == link.data() + link.size();
    }
    if (!ok) throw DataError("malformed alignment link '" + link + "'");
    a.links.emplace_back(i, j);
  }
  std::sort(a.links.begin(), a.links.end());
  a.links.erase(std::unique(a.links.begin(), a.links.end()), a.links.end());
  return a;
}

Alignment Align(const SentencePair& pair, const TranslationTable& table) {
  Alignment a;
  a.pair_id = pair.id;
  const std::size_t l = pair.source.size();
  const std::size_t m = pair.target.size();
  std::vector<std::optional<std::uint32_t>> src(l + 1);
  src[0] = 0;
  for (std::size_t i = 0; i < l; ++i) src[i + 1] = table.SourceId(pair.source[i]);
  std::vector<double> priors;
  for (std::size_t j = 0; j < m; ++j) {
    const auto t = table.TargetId(pair.target[j]);
    if (!t) continue;
    FillPriors(table.diagonal(), j, l, m, priors);
    std::size_t best = 0;
    double best_score = table.Smoothed(src[0], *t) * priors[0];
    for (std::size_t i = 1; i <= l; ++i) {
      const double score = table.Smoothed(src[i], *t) * priors[i];
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best > 0) a.links.emplace_back(best - 1, j);
  }
  std::sort(a.links.begin(), a.links.end());
  return a;
}

// ---------------------------------------------------------------------------
// Lexicon

std::optional<Token> Lexicon::Lookup(std::string_view word) const {
  auto it = entries.find(std::string(word));
  if (it == entries.end()) return std::nullopt;
  return it->second.source_word;
}

std::string Lexicon::ToJson() const {
  nlohmann::ordered_json out;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& [word, e] : entries) {
    nlohmann::ordered_json entry;
    entry["word"] = word;
    entry["source_word"] = e.source_word;
    entry["count"] = e.count;
    entry["linked"] = e.linked;
    entry["occurrences"] = e.occurrences;
    list.push_back(std::move(entry));
  }
  out["entries"] = std::move(list);
  out["unaligned"] = unaligned;
  return out.dump(2) + "\n";
}

Lexicon Lexicon::FromJson(std::string_view json) {
  Lexicon lexicon;
  try {
    const nlohmann::json parsed = nlohmann::json::parse(json);
    for (const auto& entry : parsed.at("entries")) {
      lexicon.entries[entry.at("word").get<std::string>()] = {
          entry.at("source_word").get<std::string>(),
          entry.at("count").get<std::size_t>(),
          entry.at("linked").get<std::size_t>(),
          entry.at("occurrences").get<std::size_t>()};
    }
    lexicon.unaligned = parsed.at("unaligned").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed lexicon: ") + e.what());
  }
  return lexicon;
}

Lexicon ExtractLexicon(const ParallelCorpus& corpus,
                       const TranslationTable& table,
                       std::span<const Token> words, int threads) {
  struct Tally {
    std::map<Token, std::size_t> counts;
    std::size_t linked = 0;
    std::size_t occurrences = 0;
  };
  std::vector<Tally> tallies(words.size());
  ParallelFor(words.size(), threads, [&](std::size_t w) {
    const Token& word = words[w];
    Tally& tally = tallies[w];
    for (const SentencePair& pair : corpus.pairs()) {
      if (!pair.target.Contains(word)) continue;
      const Alignment a = Align(pair, table);
      for (std::size_t j = 0; j < pair.target.size(); ++j) {
        if (pair.target[j] != word) continue;
        ++tally.occurrences;
        const std::vector<std::size_t> sources = a.SourcesFor(j);
        if (!sources.empty()) ++tally.linked;
        for (std::size_t i : sources) ++tally.counts[pair.source[i]];
      }
    }
  });

  Lexicon lexicon;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const Tally& tally = tallies[w];
    const Token* best = nullptr;
    std::size_t best_count = 0;
    // std::map iterates lexicographically, so strict > keeps the smallest
    // token among ties.
    for (const auto& [token, count] : tally.counts) {
      if (count > best_count) {
        best = &token;
        best_count = count;
      }
    }
    if (best == nullptr) {
      lexicon.unaligned.push_back(words[w]);
      continue;
    }
    lexicon.entries[words[w]] = {*best, best_count, tally.linked,
                                 tally.occurrences};
  }
  return lexicon;
}

}  // namespace fewshot
