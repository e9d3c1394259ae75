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

#include "fewshot/corpus.h"

#include <algorithm>
#include <unordered_set>

#include "fewshot/error.h"
#include "fewshot/text_io.h"

namespace fewshot {

std::string_view OriginName(Origin origin) {
  return origin == Origin::kGenuine ? "genuine" : "backtranslation";
}

Origin ParseOrigin(std::string_view name) {
  if (name == "genuine") return Origin::kGenuine;
  if (name == "backtranslation") return Origin::kBacktranslation;
  throw ConfigError("unknown origin '" + std::string(name) + "'");
}

CountUnit ParseCountUnit(std::string_view name) {
  if (name == "token") return CountUnit::kToken;
  if (name == "sentence") return CountUnit::kSentence;
  throw ConfigError("unknown count unit '" + std::string(name) +
                    "' (expected token or sentence)");
}

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Sentence::Sentence(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  for (const Token& t : tokens_) {
    if (t.empty()) throw DataError("empty token in sentence");
    if (t.find_first_of(" \t\r\n\v\f") != Token::npos) {
      throw DataError("token '" + t + "' contains whitespace");
    }
  }
}

Sentence Sentence::Parse(std::string_view line) {
  std::vector<Token> tokens = SplitWhitespace(line);
  if (tokens.empty()) throw DataError("empty sentence");
  Sentence s;
  s.tokens_ = std::move(tokens);
  return s;
}

std::size_t Sentence::Count(std::string_view word) const {
  return static_cast<std::size_t>(
      std::count(tokens_.begin(), tokens_.end(), word));
}

bool Sentence::Contains(std::string_view word) const {
  return Find(word).has_value();
}

std::optional<std::size_t> Sentence::Find(std::string_view word) const {
  auto it = std::find(tokens_.begin(), tokens_.end(), word);
  if (it == tokens_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - tokens_.begin());
}

std::string Sentence::ToString() const { return Join(tokens_, " "); }

void FrequencyTable::Add(const Sentence& sentence) {
  std::unordered_set<std::string_view> seen;
  for (const Token& t : sentence.tokens()) {
    ++tokens_[t];
    if (seen.insert(t).second) ++sentences_[t];
  }
}

std::size_t FrequencyTable::Count(std::string_view word,
                                  CountUnit unit) const {
  const auto& table = unit == CountUnit::kToken ? tokens_ : sentences_;
  auto it = table.find(std::string(word));
  return it == table.end() ? 0 : it->second;
}

ParallelCorpus::ParallelCorpus(std::vector<SentencePair> pairs)
    : pairs_(std::move(pairs)) {
  index_.reserve(pairs_.size());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const SentencePair& p = pairs_[i];
    if (!index_.emplace(p.id, i).second) {
      throw DataError("duplicate pair id " + std::to_string(p.id));
    }
    source_freq_.Add(p.source);
    target_freq_.Add(p.target);
  }
}

const SentencePair* ParallelCorpus::FindById(PairId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &pairs_[it->second];
}

ParallelCorpus ParallelCorpus::Concat(const ParallelCorpus& head,
                                      const ParallelCorpus& tail) {
  std::vector<SentencePair> pairs = head.pairs_;
  PairId next = 0;
  for (const SentencePair& p : head.pairs_) next = std::max(next, p.id + 1);
  for (SentencePair p : tail.pairs_) {
    p.id = next++;
    pairs.push_back(std::move(p));
  }
  return ParallelCorpus(std::move(pairs));
}

namespace {

Sentence ParseLine(std::string_view line, const std::filesystem::path& path,
                   std::size_t line_no, bool lowercase) {
  std::vector<Token> tokens =
      lowercase ? SplitWhitespace(AsciiLower(line)) : SplitWhitespace(line);
  if (tokens.empty()) {
    throw DataError(path.string() + ":" + std::to_string(line_no) +
                    ": empty line");
  }
  return Sentence(std::move(tokens));
}

}  // namespace

ParallelCorpus LoadCorpus(const std::filesystem::path& source_path,
                          const std::filesystem::path& target_path,
                          Origin origin, const LoadOptions& options) {
  const std::vector<std::string> src = ReadLines(source_path);
  const std::vector<std::string> tgt = ReadLines(target_path);
  if (src.size() != tgt.size()) {
    throw DataError("line count mismatch: " + source_path.string() + " has " +
                    std::to_string(src.size()) + " lines, " +
                    target_path.string() + " has " +
                    std::to_string(tgt.size()));
  }
  std::vector<SentencePair> pairs;
  pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    pairs.push_back({options.first_id + i,
                     ParseLine(src[i], source_path, i + 1, options.lowercase),
                     ParseLine(tgt[i], target_path, i + 1, options.lowercase),
                     origin});
  }
  return ParallelCorpus(std::move(pairs));
}

ParallelCorpus LoadTsvCorpus(const std::filesystem::path& path, Origin origin,
                             const LoadOptions& options) {
  const std::vector<std::string> lines = ReadLines(path);
  std::vector<SentencePair> pairs;
  pairs.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(i + 1) +
                      ": expected exactly one TAB");
    }
    std::string_view view(line);
    pairs.push_back(
        {options.first_id + i,
         ParseLine(view.substr(0, tab), path, i + 1, options.lowercase),
         ParseLine(view.substr(tab + 1), path, i + 1, options.lowercase),
         origin});
  }
  return ParallelCorpus(std::move(pairs));
}

std::string RenderSide(const ParallelCorpus& corpus, Side side) {
  std::string out;
  for (const SentencePair& p : corpus.pairs()) {
    out += p.side(side).ToString();
    out += '\n';
  }
  return out;
}

void SaveCorpus(const ParallelCorpus& corpus,
                const std::filesystem::path& source_path,
                const std::filesystem::path& target_path) {
  AtomicWriteFile(source_path, RenderSide(corpus, Side::kSource));
  AtomicWriteFile(target_path, RenderSide(corpus, Side::kTarget));
}

std::size_t CountOccurrences(const ParallelCorpus& corpus,
                             std::string_view word, Side side,
                             CountUnit unit) {
  return corpus.frequencies(side).Count(word, unit);
}

}  // namespace fewshot
