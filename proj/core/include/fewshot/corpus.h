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

// Tokenized parallel corpora and their frequency statistics.
//
// Input is expected to be word-tokenized already (one sentence per line,
// tokens separated by spaces). Nothing here re-tokenizes or applies subword
// segmentation.

#ifndef FEWSHOT_CORPUS_H_
#define FEWSHOT_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fewshot {

using Token = std::string;
using PairId = std::uint64_t;

enum class Side { kSource, kTarget };
enum class Origin { kGenuine, kBacktranslation };

// Token-level counts every occurrence; sentence-level counts each sentence
// containing the word once.
enum class CountUnit { kToken, kSentence };

std::string_view OriginName(Origin origin);
Origin ParseOrigin(std::string_view name);
CountUnit ParseCountUnit(std::string_view name);

// ASCII-only lowercasing; bytes >= 0x80 pass through untouched.
std::string AsciiLower(std::string_view text);

class Sentence {
 public:
  Sentence() = default;
  // Throws DataError if any token is empty or contains whitespace.
  explicit Sentence(std::vector<Token> tokens);

  // Splits a space-separated line. Throws DataError on a blank line.
  static Sentence Parse(std::string_view line);

  const std::vector<Token>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }

  std::size_t Count(std::string_view word) const;
  bool Contains(std::string_view word) const;
  std::optional<std::size_t> Find(std::string_view word) const;

  std::string ToString() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;

 private:
  std::vector<Token> tokens_;
};

struct SentencePair {
  PairId id = 0;
  Sentence source;
  Sentence target;
  Origin origin = Origin::kGenuine;

  const Sentence& side(Side s) const {
    return s == Side::kSource ? source : target;
  }
  bool SameText(const SentencePair& other) const {
    return source == other.source && target == other.target;
  }
};

class FrequencyTable {
 public:
  void Add(const Sentence& sentence);
  std::size_t Count(std::string_view word,
                    CountUnit unit = CountUnit::kToken) const;
  const std::unordered_map<Token, std::size_t>& token_counts() const {
    return tokens_;
  }

 private:
  std::unordered_map<Token, std::size_t> tokens_;
  std::unordered_map<Token, std::size_t> sentences_;
};

// Immutable once constructed; safe for concurrent reads.
class ParallelCorpus {
 public:
  ParallelCorpus() = default;
  // Throws DataError on duplicate ids.
  explicit ParallelCorpus(std::vector<SentencePair> pairs);

  const std::vector<SentencePair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const SentencePair& operator[](std::size_t i) const { return pairs_[i]; }

  const FrequencyTable& frequencies(Side side) const {
    return side == Side::kSource ? source_freq_ : target_freq_;
  }

  const SentencePair* FindById(PairId id) const;

  // Appends `tail` after `head`, renumbering the tail's ids so they follow
  // the largest id in `head`.
  static ParallelCorpus Concat(const ParallelCorpus& head,
                               const ParallelCorpus& tail);

 private:
  std::vector<SentencePair> pairs_;
  FrequencyTable source_freq_;
  FrequencyTable target_freq_;
  std::unordered_map<PairId, std::size_t> index_;
};

struct LoadOptions {
  bool lowercase = false;
  PairId first_id = 0;
};

// Loads two line-aligned files. Ids are assigned in file order starting at
// options.first_id.
ParallelCorpus LoadCorpus(const std::filesystem::path& source_path,
                          const std::filesystem::path& target_path,
                          Origin origin, const LoadOptions& options = {});

// Loads a single file of "source<TAB>target" lines.
ParallelCorpus LoadTsvCorpus(const std::filesystem::path& path, Origin origin,
                             const LoadOptions& options = {});

void SaveCorpus(const ParallelCorpus& corpus,
                const std::filesystem::path& source_path,
                const std::filesystem::path& target_path);

// Renders one side as newline-terminated lines.
std::string RenderSide(const ParallelCorpus& corpus, Side side);

std::size_t CountOccurrences(const ParallelCorpus& corpus,
                             std::string_view word, Side side,
                             CountUnit unit = CountUnit::kToken);

}  // namespace fewshot

#endif  // FEWSHOT_CORPUS_H_
