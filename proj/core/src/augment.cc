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

#include "fewshot/augment.h"

#include <algorithm>
#include <unordered_map>

#include "fewshot/error.h"
#include "fewshot/log.h"
#include "fewshot/parallel.h"
#include "fewshot/rng.h"
#include "json.hpp"

namespace fewshot {

std::string_view DiscardReasonName(DiscardReason reason) {
  switch (reason) {
    case DiscardReason::kNoAlignedSource:
      return "no_aligned_source";
    case DiscardReason::kNonConsecutiveAlignment:
      return "non_consecutive_alignment";
    case DiscardReason::kWordAlreadyPresent:
      return "w_already_present";
    case DiscardReason::kDegenerate:
      return "degenerate";
  }
  return "degenerate";
}

namespace {

DiscardReason ParseDiscardReason(std::string_view name) {
  for (DiscardReason r :
       {DiscardReason::kNoAlignedSource, DiscardReason::kNonConsecutiveAlignment,
        DiscardReason::kWordAlreadyPresent, DiscardReason::kDegenerate}) {
    if (DiscardReasonName(r) == name) return r;
  }
  throw DataError("unknown discard reason '" + std::string(name) + "'");
}

}  // namespace

std::variant<SyntheticPair, DiscardRecord> Substitute(
    const ContextMatch& match, const SentencePair& candidate,
    const Alignment& alignment, std::string_view word,
    std::string_view source_word) {
  auto discard = [&](DiscardReason reason) {
    return DiscardRecord{candidate.id, reason, match.position};
  };
  if (match.position >= candidate.target.size() || word.empty() ||
      source_word.empty() || match.pair_id != candidate.id) {
    return discard(DiscardReason::kDegenerate);
  }
  for (const auto& [i, j] : alignment.links) {
    if (i >= candidate.source.size() || j >= candidate.target.size()) {
      return discard(DiscardReason::kDegenerate);
    }
  }
  if (candidate.target.Contains(word)) {
    return discard(DiscardReason::kWordAlreadyPresent);
  }
  const std::vector<std::size_t> sources = alignment.SourcesFor(match.position);
  if (sources.empty()) return discard(DiscardReason::kNoAlignedSource);
  const std::size_t begin = sources.front();
  const std::size_t end = sources.back() + 1;
  if (end - begin != sources.size()) {
    return discard(DiscardReason::kNonConsecutiveAlignment);
  }

  std::vector<Token> target = candidate.target.tokens();
  target[match.position] = std::string(word);
  std::vector<Token> source;
  source.reserve(candidate.source.size() - (end - begin) + 1);
  const auto& src = candidate.source.tokens();
  source.insert(source.end(), src.begin(), src.begin() + begin);
  source.emplace_back(source_word);
  source.insert(source.end(), src.begin() + end, src.end());

  SyntheticPair out;
  out.pair = {candidate.id, Sentence(std::move(source)),
              Sentence(std::move(target)), candidate.origin};
  out.provenance = {candidate.id, match.position, begin, end,
                    std::string(word), std::string(source_word),
                    match.similarity};
  return out;
}

Alignment FixedAlignmentSource::AlignmentFor(const SentencePair& pair) const {
  auto it = links_.find(pair.id);
  if (it == links_.end()) return Alignment{pair.id, {}};
  return it->second;
}

void AugmentConfig::Validate() const {
  if (per_reference_target < 1) {
    throw ConfigError("per_reference_target must be >= 1");
  }
}

std::size_t AugmentResult::attempts() const {
  std::size_t n = 0;
  for (const auto& r : references) n += r.attempts;
  return n;
}

std::size_t AugmentResult::successes() const {
  std::size_t n = 0;
  for (const auto& r : references) n += r.synthetics.size();
  return n;
}

std::map<DiscardReason, std::size_t> AugmentResult::DiscardCounts() const {
  std::map<DiscardReason, std::size_t> counts;
  for (const auto& r : references) {
    for (const auto& d : r.discards) ++counts[d.reason];
  }
  return counts;
}

bool HasSubwordMarker(const Sentence& sentence) {
  return std::any_of(sentence.tokens().begin(), sentence.tokens().end(),
                     [](const Token& t) { return t.ends_with(kSubwordMarker); });
}

namespace {

void RequireWordTokens(const SentencePair& pair) {
  if (HasSubwordMarker(pair.source) || HasSubwordMarker(pair.target)) {
    throw DataError("pair " + std::to_string(pair.id) +
                    " contains subword units; augmentation expects "
                    "word-tokenized text");
  }
}

// Runs substitution over matches[from, to) until `target` synthetics exist.
void Consume(const std::vector<ContextMatch>& matches, std::size_t from,
             const ParallelCorpus& candidates,
             const AlignmentSource& alignments, std::string_view word,
             std::string_view source_word, std::size_t target,
             ReferenceAugmentation& out) {
  for (std::size_t r = from;
       r < matches.size() && out.synthetics.size() < target; ++r) {
    const SentencePair* candidate = candidates.FindById(matches[r].pair_id);
    ++out.attempts;
    if (candidate == nullptr) {
      out.discards.push_back(
          {matches[r].pair_id, DiscardReason::kDegenerate, matches[r].position});
      continue;
    }
    auto outcome = Substitute(matches[r], *candidate,
                              alignments.AlignmentFor(*candidate), word,
                              source_word);
    if (auto* synthetic = std::get_if<SyntheticPair>(&outcome)) {
      out.synthetics.push_back(std::move(*synthetic));
    } else {
      out.discards.push_back(std::get<DiscardRecord>(outcome));
    }
  }
}

}  // namespace

AugmentResult AugmentWord(std::string_view word,
                          std::span<const ReferenceQuery> references,
                          const ParallelCorpus& candidates,
                          const EmbeddingProvider& provider,
                          const AlignmentSource& alignments,
                          const Lexicon& lexicon, const AugmentConfig& config) {
  config.Validate();
  const std::optional<Token> source_word = lexicon.Lookup(word);
  if (!source_word) {
    throw DataError("lexicon has no translation for evaluation word '" +
                    std::string(word) + "'");
  }
  for (const ReferenceQuery& q : references) {
    RequireWordTokens(q.pair);
    if (q.w_position >= q.pair.target.size() ||
        q.pair.target[q.w_position] != word) {
      throw DataError("reference pair " + std::to_string(q.pair.id) +
                      " does not hold '" + std::string(word) +
                      "' at position " + std::to_string(q.w_position));
    }
  }
  for (const SentencePair& p : candidates.pairs()) RequireWordTokens(p);

  AugmentResult result;
  result.word = std::string(word);
  result.source_word = *source_word;
  result.references.resize(references.size());

  const std::size_t target = config.per_reference_target;
  ParallelFor(references.size(), config.search.threads, [&](std::size_t r) {
    const ReferenceQuery& q = references[r];
    ReferenceAugmentation& out = result.references[r];
    out.reference_id = q.pair.id;

    SearchConfig search = config.search;
    search.threads = 1;
    search.seed = Rng::Derive(Rng::Derive(config.search.seed, word),
                              static_cast<std::uint64_t>(q.pair.id));
    search.k = config.EffectiveK();
    SearchResult found = SearchContexts(q.pair, q.w_position, candidates,
                                        provider, search);
    Consume(found.matches, 0, candidates, alignments, word, *source_word,
            target, out);

    if (out.synthetics.size() < target && found.matches.size() == search.k) {
      const std::size_t seen = found.matches.size();
      search.k *= 2;
      found = SearchContexts(q.pair, q.w_position, candidates, provider,
                             search);
      Consume(found.matches, seen, candidates, alignments, word, *source_word,
              target, out);
    }
    if (out.synthetics.size() < target) {
      out.shortfall = true;
      Warn("reference " + std::to_string(q.pair.id) + " for '" +
           std::string(word) + "' yielded " +
           std::to_string(out.synthetics.size()) + " of " +
           std::to_string(target) + " synthetic pairs");
    }
  });
  return result;
}

std::string AugmentResultsToJson(std::span<const AugmentResult> results) {
  nlohmann::ordered_json words = nlohmann::ordered_json::array();
  for (const AugmentResult& result : results) {
    nlohmann::ordered_json w;
    w["word"] = result.word;
    w["source_word"] = result.source_word;
    w["attempts"] = result.attempts();
    w["successes"] = result.successes();
    nlohmann::ordered_json reasons = nlohmann::ordered_json::object();
    for (const auto& [reason, n] : result.DiscardCounts()) {
      reasons[std::string(DiscardReasonName(reason))] = n;
    }
    w["discards"] = std::move(reasons);
    nlohmann::ordered_json refs = nlohmann::ordered_json::array();
    for (const ReferenceAugmentation& r : result.references) {
      nlohmann::ordered_json ref;
      ref["reference_id"] = r.reference_id;
      ref["attempts"] = r.attempts;
      ref["shortfall"] = r.shortfall;
      nlohmann::ordered_json synthetics = nlohmann::ordered_json::array();
      for (const SyntheticPair& s : r.synthetics) {
        nlohmann::ordered_json e;
        e["source_pair_id"] = s.provenance.source_pair_id;
        e["masked_position"] = s.provenance.masked_position;
        e["source_span"] = {s.provenance.span_begin, s.provenance.span_end};
        e["similarity"] = s.provenance.similarity;
        e["origin"] = std::string(OriginName(s.pair.origin));
        e["source"] = s.pair.source.ToString();
        e["target"] = s.pair.target.ToString();
        synthetics.push_back(std::move(e));
      }
      ref["synthetics"] = std::move(synthetics);
      nlohmann::ordered_json discards = nlohmann::ordered_json::array();
      for (const DiscardRecord& d : r.discards) {
        discards.push_back({{"pair_id", d.pair_id},
                            {"position", d.position},
                            {"reason", std::string(DiscardReasonName(d.reason))}});
      }
      ref["discards"] = std::move(discards);
      refs.push_back(std::move(ref));
    }
    w["references"] = std::move(refs);
    words.push_back(std::move(w));
  }
  nlohmann::ordered_json out;
  out["words"] = std::move(words);
  return out.dump(2) + "\n";
}

std::vector<AugmentResult> AugmentResultsFromJson(std::string_view json) {
  std::vector<AugmentResult> results;
  try {
    const nlohmann::json parsed = nlohmann::json::parse(json);
    for (const auto& w : parsed.at("words")) {
      AugmentResult result;
      result.word = w.at("word").get<std::string>();
      result.source_word = w.at("source_word").get<std::string>();
      for (const auto& ref : w.at("references")) {
        ReferenceAugmentation r;
        r.reference_id = ref.at("reference_id").get<PairId>();
        r.attempts = ref.at("attempts").get<std::size_t>();
        r.shortfall = ref.at("shortfall").get<bool>();
        for (const auto& e : ref.at("synthetics")) {
          SyntheticPair s;
          s.provenance.source_pair_id = e.at("source_pair_id").get<PairId>();
          s.provenance.masked_position = e.at("masked_position").get<std::size_t>();
          s.provenance.span_begin = e.at("source_span").at(0).get<std::size_t>();
          s.provenance.span_end = e.at("source_span").at(1).get<std::size_t>();
          s.provenance.similarity = e.at("similarity").get<double>();
          s.provenance.word = result.word;
          s.provenance.source_word = result.source_word;
          s.pair = {s.provenance.source_pair_id,
                    Sentence::Parse(e.at("source").get<std::string>()),
                    Sentence::Parse(e.at("target").get<std::string>()),
                    ParseOrigin(e.at("origin").get<std::string>())};
          r.synthetics.push_back(std::move(s));
        }
        for (const auto& d : ref.at("discards")) {
          r.discards.push_back({d.at("pair_id").get<PairId>(),
                                ParseDiscardReason(d.at("reason").get<std::string>()),
                                d.at("position").get<std::size_t>()});
        }
        result.references.push_back(std::move(r));
      }
      results.push_back(std::move(result));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed augmentation sidecar: ") + e.what());
  }
  return results;
}

}  // namespace fewshot
