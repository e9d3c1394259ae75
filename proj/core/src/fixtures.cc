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

#include "fewshot/fixtures.h"

#include <algorithm>
#include <array>
#include <set>
#include <string_view>

#include "fewshot/error.h"
#include "fewshot/rng.h"

namespace fewshot {

void ToyLanguageSpec::Validate() const {
  const auto lex = ResolvedLexicon();
  if (lex.empty()) throw ConfigError("toy language needs a vocabulary");
  std::set<Token> sources;
  std::set<Token> targets;
  for (const auto& [s, t] : lex) {
    if (!sources.insert(s).second || !targets.insert(t).second) {
      throw ConfigError("toy lexicon is not a bijection (repeated '" +
                        (sources.count(s) ? s : t) + "')");
    }
  }
  if (min_length < 1 || min_length > max_length) {
    throw ConfigError("toy sentence lengths must satisfy 1 <= min <= max");
  }
  if (distinct_tokens && max_length > lex.size()) {
    throw ConfigError("distinct-token sentences cannot exceed the vocabulary");
  }
}

std::vector<std::pair<Token, Token>> ToyLanguageSpec::ResolvedLexicon() const {
  if (!lexicon.empty()) return lexicon;
  std::vector<std::pair<Token, Token>> lex;
  lex.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    if (copy) {
      lex.emplace_back("w" + std::to_string(i), "w" + std::to_string(i));
    } else {
      lex.emplace_back("s" + std::to_string(i), "t" + std::to_string(i));
    }
  }
  return lex;
}

namespace {

// Lexicon indices for one sentence.
std::vector<std::size_t> DrawSentence(const ToyLanguageSpec& spec,
                                      std::size_t vocab, Rng& rng) {
  const std::size_t length =
      spec.min_length + rng.Uniform(spec.max_length - spec.min_length + 1);
  if (spec.distinct_tokens) return rng.SampleIndices(vocab, length);
  std::vector<std::size_t> words(length);
  for (auto& w : words) w = rng.Uniform(vocab);
  return words;
}

SentencePair Render(const std::vector<std::pair<Token, Token>>& lex,
                    const std::vector<std::size_t>& words, PairId id,
                    Origin origin) {
  std::vector<Token> src;
  std::vector<Token> tgt;
  for (std::size_t w : words) {
    src.push_back(lex[w].first);
    tgt.push_back(lex[w].second);
  }
  return {id, Sentence(std::move(src)), Sentence(std::move(tgt)), origin};
}

}  // namespace

ParallelCorpus GenerateCorpus(const ToyLanguageSpec& spec, PairId first_id,
                              Origin origin) {
  spec.Validate();
  const auto lex = spec.ResolvedLexicon();
  Rng rng(spec.seed);
  std::vector<SentencePair> pairs;
  pairs.reserve(spec.num_pairs);
  for (std::size_t n = 0; n < spec.num_pairs; ++n) {
    pairs.push_back(Render(lex, DrawSentence(spec, lex.size(), rng),
                           first_id + n, origin));
  }
  return ParallelCorpus(std::move(pairs));
}

namespace {

// Plants each word at a distinct random position of `pair`.
void Plant(SentencePair& pair, const std::vector<const PlantedWord*>& words,
           Rng& rng) {
  std::vector<Token> src = pair.source.tokens();
  std::vector<Token> tgt = pair.target.tokens();
  const std::vector<std::size_t> slots = rng.SampleIndices(tgt.size(), words.size());
  for (std::size_t k = 0; k < words.size(); ++k) {
    src[slots[k]] = words[k]->source;
    tgt[slots[k]] = words[k]->target;
  }
  pair.source = Sentence(std::move(src));
  pair.target = Sentence(std::move(tgt));
}

std::vector<SentencePair> PlantedSide(const PipelineFixtureSpec& spec,
                                      std::size_t background, bool train,
                                      Rng& rng) {
  const auto lex = spec.language.ResolvedLexicon();
  ToyLanguageSpec language = spec.language;
  if (language.min_length < 2) language.min_length = 2;
  language.max_length = std::max(language.max_length, language.min_length);

  // Background sentences, then one sentence per planted occurrence.
  std::vector<std::vector<const PlantedWord*>> plan(background);
  const std::size_t shared = train ? spec.shared_sentences : 0;
  std::vector<std::size_t> remaining;
  for (const PlantedWord& w : spec.planted) {
    remaining.push_back(train ? w.train_sentences : w.test_sentences);
  }
  for (std::size_t s = 0; s < shared; ++s) {
    const std::size_t a = (2 * s) % spec.planted.size();
    const std::size_t b = (2 * s + 1) % spec.planted.size();
    if (a == b || remaining[a] == 0 || remaining[b] == 0) {
      throw ConfigError("cannot plant shared sentence " + std::to_string(s));
    }
    --remaining[a];
    --remaining[b];
    plan.push_back({&spec.planted[a], &spec.planted[b]});
  }
  for (std::size_t w = 0; w < spec.planted.size(); ++w) {
    for (std::size_t k = 0; k < remaining[w]; ++k) {
      plan.push_back({&spec.planted[w]});
    }
  }
  rng.Shuffle(plan);

  std::vector<SentencePair> pairs;
  pairs.reserve(plan.size());
  for (std::size_t n = 0; n < plan.size(); ++n) {
    SentencePair pair =
        Render(lex, DrawSentence(language, lex.size(), rng), n, Origin::kGenuine);
    if (!plan[n].empty()) Plant(pair, plan[n], rng);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace

PipelineFixture GeneratePipelineFixture(const PipelineFixtureSpec& spec) {
  spec.language.Validate();
  if (spec.planted.empty()) throw ConfigError("fixture needs planted words");
  Rng train_rng(Rng::Derive(spec.seed, "train"));
  Rng test_rng(Rng::Derive(spec.seed, "test"));
  PipelineFixture fixture;
  fixture.train =
      ParallelCorpus(PlantedSide(spec, spec.background_train, true, train_rng));
  fixture.test =
      ParallelCorpus(PlantedSide(spec, spec.background_test, false, test_rng));
  fixture.planted = spec.planted;
  return fixture;
}

std::vector<PlantedWord> NewsLikePlantedWords(std::size_t count,
                                              std::size_t train_sentences,
                                              std::size_t test_sentences) {
  static constexpr std::array<std::string_view, 96> kNames = {
      "2018",        "ATM",          "Ahmedabad",     "Ambani",     "Amul",
      "Anand",       "Ayr",          "BJP",           "Bachchan",   "Becker",
      "Bedford",     "Chequers",     "Constantinople", "Conway",    "DM",
      "Dinesh",      "Dragons",      "Fidelity",      "Fleetwood",  "GB",
      "GST",         "Gadkari",      "Giga",          "HDFC",       "Hastings",
      "Isabel",      "Jammu",        "Kapoor",        "Kavanaugh",  "Keyser",
      "Kohli",       "Lavrov",       "Lina",          "Lucknow",    "MLA",
      "Manish",      "Mayorga",      "Meng",          "Modi",       "Molinari",
      "Mukesh",      "Musk",         "Márquez",       "Nana",       "Narendra",
      "Nifty",       "Oldham",       "Palu",          "Patriarch",  "Patriarchate",
      "Prithvi",     "Pune",         "RCN",           "RTI",        "Rajkot",
      "Rupani",      "Rupee",        "Sachin",        "Salman",     "Scalia",
      "Seeley",      "Sensex",       "Shetty",        "Shilpa",     "Spiegel",
      "Sulawesi",    "Surat",        "Sushma",        "Tendulkar",  "Tesla",
      "Tiwari",      "Twitter",      "Vadodara",      "Virat",      "Vyas",
      "Watts",       "app",          "apps",          "cleanliness", "crores",
      "cylinders",   "dough",        "fortress",      "ghee",       "inaugurate",
      "intoxicated", "lakhs",        "litre",         "mentioning", "moustache",
      "niece",       "refrigerators", "sacrificed",   "slab",       "smartphone",
      "strawberries"};
  std::vector<PlantedWord> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PlantedWord w;
    w.target = i < kNames.size() ? std::string(kNames[i])
                                 : "rare" + std::to_string(i);
    w.source = "src_" + w.target;
    w.train_sentences = train_sentences;
    w.test_sentences = test_sentences;
    words.push_back(std::move(w));
  }
  return words;
}

ParallelCorpus NuclearExampleCorpus() {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 16>
      kPairs = {{
          {"le charbon est une énergie non renouvelable .",
           "coal is a non-renewable energy ."},
          {"le charbon est sale .", "coal is dirty ."},
          {"nous brûlons du charbon .", "we burn coal ."},
          {"le prix du charbon augmente .", "the price of coal rises ."},
          {"la centrale à charbon ferme .", "the coal plant closes ."},
          {"le gaz est une énergie fossile .", "gas is a fossil energy ."},
          {"le vent est une énergie propre .", "wind is a clean energy ."},
          {"le soleil est une énergie renouvelable .",
           "solar is a renewable energy ."},
          {"la centrale ferme .", "the plant closes ."},
          {"le prix du gaz augmente .", "the price of gas rises ."},
          {"nous brûlons du gaz .", "we burn gas ."},
          {"le vent est fort .", "the wind is strong ."},
          {"le gaz est sale .", "gas is dirty ."},
          {"une énergie propre .", "a clean energy ."},
          {"la centrale à gaz ferme .", "the gas plant closes ."},
          {"le soleil est fort .", "the sun is strong ."},
      }};
  std::vector<SentencePair> pairs;
  for (std::size_t i = 0; i < kPairs.size(); ++i) {
    pairs.push_back({i, Sentence::Parse(kPairs[i].first),
                     Sentence::Parse(kPairs[i].second), Origin::kGenuine});
  }
  return ParallelCorpus(std::move(pairs));
}

SulawesiExample MakeSulawesiExample() {
  static constexpr std::string_view kReference =
      "A powerful 7.5 magnitude earthquake hit the Indonesian island of "
      "Sulawesi on Friday , September 29 , triggering a tsunami and leaving "
      "nearly 400 people dead .";
  static constexpr std::array<std::string_view, 20> kCandidates = {
      // The five expected top matches.
      "This labour shortage prompted the authorities to import slaves from "
      "Indonesia and Madagascar .",
      "Many of them have settled down in Ahmedabad , Vadodara , Mumbai , "
      "Kolkota , Delhi , Nagpur and far away places like Java , Rangoon , "
      "Singapore , Fiji , Eden , Kenya , Uganda , America etc and established "
      "their business in these places .",
      "The rice lands of Java are among the richest in the world .",
      "Rising ocean temperatures and ocean acidification means that the "
      "capacity of the ocean carbon sink will gradually get weaker , giving "
      "rise to global concerns expressed in the Monaco and Manado "
      "Declarations .",
      "Lara 's first school was St. Joseph 's Roman Catholic primary .",
      // Distractors.
      "The minister said the budget would be presented next week .",
      "Prices of vegetables rose sharply after the heavy rains .",
      "The team won the final match by six wickets .",
      "He thanked the voters for their support in the election .",
      "The company reported a rise in quarterly profits .",
      "Schools will remain closed until further notice .",
      "The film was released in theatres across the country .",
      "Police arrested two men in connection with the robbery .",
      "The new bridge will be opened to traffic on Monday .",
      "Farmers demanded a higher price for their crops .",
      "The court adjourned the hearing to next month .",
      "She was awarded a gold medal for her performance .",
      "The train was delayed by three hours due to fog .",
      "Doctors advised people to drink plenty of water .",
      "The festival attracts thousands of visitors every year .",
  };
  SulawesiExample example;
  const Sentence reference = Sentence::Parse(kReference);
  example.reference = {1000, reference, reference, Origin::kGenuine};
  example.word_position = *reference.Find("Sulawesi");
  std::vector<SentencePair> pairs;
  for (std::size_t i = 0; i < kCandidates.size(); ++i) {
    const Sentence s = Sentence::Parse(kCandidates[i]);
    pairs.push_back({i, s, s, Origin::kGenuine});
  }
  example.candidates = ParallelCorpus(std::move(pairs));
  example.expected_top = {0, 1, 2, 3, 4};
  return example;
}

void WritePipelineFixture(const PipelineFixture& fixture,
                          const std::filesystem::path& dir) {
  SaveCorpus(fixture.train, dir / "train.src", dir / "train.tgt");
  SaveCorpus(fixture.test, dir / "test.src", dir / "test.tgt");
}

}  // namespace fewshot
