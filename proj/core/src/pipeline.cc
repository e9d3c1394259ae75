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

#include "fewshot/pipeline.h"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <set>
#include <unordered_map>

#include "fewshot/aligner.h"
#include "fewshot/augment.h"
#include "fewshot/corpus.h"
#include "fewshot/embed.h"
#include "fewshot/embed_client.h"
#include "fewshot/error.h"
#include "fewshot/hash.h"
#include "fewshot/log.h"
#include "fewshot/metrics.h"
#include "fewshot/rng.h"
#include "fewshot/sets.h"
#include "fewshot/text_io.h"
#include "fewshot/wordselect.h"

namespace fewshot {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kPathKeys[] = {
    "train_src",      "train_tgt",           "test_src", "test_tgt",
    "exclusion_file", "filtered_alignments", "output_dir"};

// Keys that may hold null in addition to their default's type.
constexpr std::string_view kNullableNumberKeys[] = {"aligner_tension"};

bool Contains(std::span<const std::string_view> keys, std::string_view key) {
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

void CheckType(const std::string& key, const json& value,
               const json& default_value) {
  const bool ok = [&] {
    if (IsPathKey(key)) return value.is_null() || value.is_string();
    if (Contains(kNullableNumberKeys, key)) {
      return value.is_null() || value.is_number();
    }
    if (default_value.is_boolean()) return value.is_boolean();
    if (default_value.is_number_unsigned() || default_value.is_number_integer()) {
      return value.is_number_unsigned() ||
             (value.is_number_integer() && value.get<std::int64_t>() >= 0);
    }
    if (default_value.is_number_float()) return value.is_number();
    if (default_value.is_string()) return value.is_string();
    if (default_value.is_array()) {
      const bool numbers = key == "schedule";
      return value.is_array() &&
             std::all_of(value.begin(), value.end(), [&](const json& v) {
               return numbers ? v.is_number_unsigned() : v.is_string();
             });
    }
    return false;
  }();
  if (!ok) {
    throw ConfigError("config key '" + key + "' has the wrong type (got " +
                      value.dump() + ")");
  }
}

fs::path Resolve(const fs::path& base, const std::string& value) {
  const fs::path p(value);
  return (p.is_absolute() ? p : base / p).lexically_normal();
}

}  // namespace

bool IsPathKey(std::string_view key) { return Contains(kPathKeys, key); }

json PipelineConfig::DefaultConfigJson() {
  return json{
      {"train_src", nullptr},
      {"train_tgt", nullptr},
      {"test_src", nullptr},
      {"test_tgt", nullptr},
      {"exclusion_file", nullptr},
      {"filtered_alignments", nullptr},
      {"output_dir", "out"},
      {"lowercase", false},
      {"count_unit", "token"},
      {"min_test_count", 5},
      {"min_train_count", 20},
      {"max_words", 100},
      {"exclusions", json::array()},
      {"approaches", {"finetune", "randompad(2)", "randompad(20)",
                      "augmented(20)", "half(20)"}},
      {"schedule", {1, 2, 3, 5, 10, 15, 20}},
      {"provider", "builtin"},
      {"provider_address", ""},
      {"embed_dimension", 256},
      {"embed_window", 5},
      {"embed_seed", 0x5eed},
      {"aligner_iterations", 5},
      {"aligner_tension", nullptr},
      {"aligner_null_probability", 0.08},
      {"search_k", 0},
      {"per_reference_target", 0},
      {"min_similarity", -1.0},
      {"averaging", "micro"},
      {"seed", 1},
      {"threads", 1},
  };
}

PipelineConfig PipelineConfig::FromJson(const json& values,
                                        const fs::path& base_dir) {
  if (!values.is_object()) throw ConfigError("config must be a JSON object");
  json merged = DefaultConfigJson();
  for (const auto& [key, value] : values.items()) {
    if (!merged.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    CheckType(key, value, merged[key]);
    merged[key] = value.is_string() && IsPathKey(key)
                      ? json(Resolve(base_dir, value.get<std::string>()).string())
                      : value;
  }
  if (!values.contains("output_dir")) {
    merged["output_dir"] =
        Resolve(base_dir, merged["output_dir"].get<std::string>()).string();
  }
  PipelineConfig config;
  config.values_ = std::move(merged);

  for (std::string_view key : kPathKeys) {
    if (key == "output_dir") continue;
    const auto path = config.Path(key);
    if (path && !fs::exists(*path)) {
      throw ConfigError("config key '" + std::string(key) + "': " +
                        path->string() + " does not exist");
    }
  }
  ParseCountUnit(config.String("count_unit"));
  ParseAveraging(config.String("averaging"));
  for (const std::string& a : config.Strings("approaches")) ApproachSpec::Parse(a);
  OccurrenceSchedule schedule;
  schedule.steps = config.values_["schedule"].get<std::vector<std::size_t>>();
  schedule.Validate();
  const std::string provider = config.String("provider");
  if (provider != "builtin" && provider != "external") {
    throw ConfigError("provider must be 'builtin' or 'external', got '" +
                      provider + "'");
  }
  if (config.Int("threads") < 1) throw ConfigError("threads must be >= 1");
  return config;
}

PipelineConfig PipelineConfig::Load(
    const std::optional<fs::path>& file,
    const std::map<std::string, std::string>& overrides) {
  json values = json::object();
  fs::path base = fs::current_path();
  if (file) {
    try {
      values = json::parse(ReadFile(*file));
    } catch (const json::parse_error& e) {
      throw ConfigError(file->string() + ": " + e.what());
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
    if (!values.is_object()) throw ConfigError("config must be a JSON object");
    base = fs::absolute(*file).parent_path();
    // File paths resolve here so overrides can use the working directory.
    for (auto& [key, value] : values.items()) {
      if (IsPathKey(key) && value.is_string()) {
        value = Resolve(base, value.get<std::string>()).string();
      }
    }
  }
  for (const auto& [key, text] : overrides) {
    if (IsPathKey(key)) {
      values[key] = Resolve(fs::current_path(), text).string();
      continue;
    }
    json parsed = json::parse(text, nullptr, /*allow_exceptions=*/false);
    values[key] = parsed.is_discarded() ? json(text) : parsed;
  }
  return FromJson(values, base);
}

std::string PipelineConfig::String(std::string_view key) const {
  return values_.at(std::string(key)).get<std::string>();
}
std::int64_t PipelineConfig::Int(std::string_view key) const {
  return values_.at(std::string(key)).get<std::int64_t>();
}
std::uint64_t PipelineConfig::Uint(std::string_view key) const {
  return values_.at(std::string(key)).get<std::uint64_t>();
}
double PipelineConfig::Double(std::string_view key) const {
  return values_.at(std::string(key)).get<double>();
}
bool PipelineConfig::Bool(std::string_view key) const {
  return values_.at(std::string(key)).get<bool>();
}
std::vector<std::string> PipelineConfig::Strings(std::string_view key) const {
  return values_.at(std::string(key)).get<std::vector<std::string>>();
}

std::optional<fs::path> PipelineConfig::Path(std::string_view key) const {
  const json& v = values_.at(std::string(key));
  if (v.is_null()) return std::nullopt;
  return fs::path(v.get<std::string>());
}

fs::path PipelineConfig::RequiredPath(std::string_view key) const {
  const auto path = Path(key);
  if (!path) throw ConfigError("config key '" + std::string(key) + "' is required");
  return *path;
}

fs::path PipelineConfig::output_dir() const { return RequiredPath("output_dir"); }

json PipelineConfig::ManifestView() const {
  json view = values_;
  view.erase("output_dir");
  return view;
}

namespace {

// Collects the files a stage reads and writes and emits its manifest.
class Stage {
 public:
  Stage(const PipelineConfig& config, std::string command)
      : config_(config), out_(config.output_dir()), command_(std::move(command)) {
    fs::create_directories(out_);
  }

  const fs::path& out() const { return out_; }

  fs::path Input(const fs::path& path) {
    if (!fs::exists(path)) {
      throw DataError(path.string() + " does not exist" +
                      (IsInside(path) ? " (run the earlier stages first)" : ""));
    }
    inputs_[Display(path)] = Sha256File(path);
    return path;
  }
  fs::path InputInOut(const std::string& rel) { return Input(out_ / rel); }

  void Write(const std::string& rel, std::string_view contents) {
    const fs::path path = out_ / rel;
    fs::create_directories(path.parent_path());
    AtomicWriteFile(path, contents);
    outputs_[rel] = Sha256Hex(contents);
  }

  void Finish(const std::string& manifest_rel) {
    ordered_json m;
    m["command"] = command_;
    m["version"] = kVersion;
    m["seed"] = config_.seed();
    m["config"] = config_.ManifestView();
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    const fs::path path = out_ / manifest_rel;
    fs::create_directories(path.parent_path());
    AtomicWriteFile(path, m.dump(2) + "\n");
  }
  void Finish() { Finish(command_ + ".manifest.json"); }

 private:
  bool IsInside(const fs::path& path) const {
    const fs::path rel = path.lexically_relative(out_);
    return !rel.empty() && *rel.begin() != "..";
  }
  std::string Display(const fs::path& path) const {
    return IsInside(path) ? path.lexically_relative(out_).generic_string()
                          : path.generic_string();
  }

  const PipelineConfig& config_;
  fs::path out_;
  std::string command_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

ParallelCorpus LoadSplitCorpus(Stage& stage, const PipelineConfig& config,
                               std::string_view which) {
  const std::string w(which);
  LoadOptions options;
  options.lowercase = config.Bool("lowercase");
  return LoadCorpus(stage.Input(config.RequiredPath(w + "_src")),
                    stage.Input(config.RequiredPath(w + "_tgt")),
                    Origin::kGenuine, options);
}

// {stem}.src, {stem}.tgt and {stem}.meta ("id<TAB>origin" per line).
void WriteCorpusFiles(Stage& stage, const ParallelCorpus& corpus,
                      const std::string& stem) {
  std::string meta;
  for (const SentencePair& p : corpus.pairs()) {
    meta += std::to_string(p.id);
    meta += '\t';
    meta += OriginName(p.origin);
    meta += '\n';
  }
  stage.Write(stem + ".src", RenderSide(corpus, Side::kSource));
  stage.Write(stem + ".tgt", RenderSide(corpus, Side::kTarget));
  stage.Write(stem + ".meta", meta);
}

ParallelCorpus ReadCorpusFiles(Stage& stage, const std::string& stem) {
  const fs::path meta_path = stage.InputInOut(stem + ".meta");
  const ParallelCorpus plain = LoadCorpus(stage.InputInOut(stem + ".src"),
                                          stage.InputInOut(stem + ".tgt"),
                                          Origin::kGenuine, {});
  const std::vector<std::string> meta = ReadLines(meta_path);
  if (meta.size() != plain.size()) {
    throw DataError(meta_path.string() + " has " + std::to_string(meta.size()) +
                    " lines, corpus has " + std::to_string(plain.size()));
  }
  std::vector<SentencePair> pairs;
  pairs.reserve(plain.size());
  for (std::size_t i = 0; i < meta.size(); ++i) {
    const std::size_t tab = meta[i].find('\t');
    if (tab == std::string::npos) {
      throw DataError(meta_path.string() + ":" + std::to_string(i + 1) +
                      ": expected id<TAB>origin");
    }
    SentencePair p = plain[i];
    try {
      p.id = std::stoull(meta[i].substr(0, tab));
    } catch (const std::exception&) {
      throw DataError(meta_path.string() + ":" + std::to_string(i + 1) +
                      ": bad pair id");
    }
    try {
      p.origin = ParseOrigin(meta[i].substr(tab + 1));
    } catch (const ConfigError& e) {
      throw DataError(meta_path.string() + ":" + std::to_string(i + 1) + ": " +
                      e.what());
    }
    pairs.push_back(std::move(p));
  }
  return ParallelCorpus(std::move(pairs));
}

json ParseJsonFile(const fs::path& path) {
  try {
    return json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<ApproachSpec> Approaches(const PipelineConfig& config) {
  std::vector<ApproachSpec> out;
  for (const std::string& a : config.Strings("approaches")) {
    out.push_back(ApproachSpec::Parse(a));
  }
  return out;
}

OccurrenceSchedule Schedule(const PipelineConfig& config) {
  OccurrenceSchedule s;
  s.steps = config.values().at("schedule").get<std::vector<std::size_t>>();
  return s;
}

std::vector<Token> WordList(const std::vector<EvaluationWord>& words) {
  std::vector<Token> out;
  for (const EvaluationWord& w : words) out.push_back(w.target_word);
  return out;
}

std::vector<EvaluationWord> ReadWords(Stage& stage) {
  return EvaluationWordsFromJson(ReadFile(stage.InputInOut("words.json")));
}

// Sampled reference ids per word, from split.json.
std::map<Token, std::vector<PairId>> ReadReferences(Stage& stage) {
  const json split = ParseJsonFile(stage.InputInOut("split.json"));
  try {
    return split.at("references").get<std::map<Token, std::vector<PairId>>>();
  } catch (const json::exception& e) {
    throw DataError("split.json: " + std::string(e.what()));
  }
}

std::vector<SentencePair> ReferencePairs(const ParallelCorpus& held_out,
                                         const std::vector<PairId>& ids) {
  std::vector<SentencePair> out;
  for (PairId id : ids) {
    const SentencePair* p = held_out.FindById(id);
    if (p == nullptr) {
      throw DataError("reference pair " + std::to_string(id) +
                      " is missing from the held-out corpus");
    }
    out.push_back(*p);
  }
  return out;
}

std::unique_ptr<EmbeddingProvider> MakeProvider(const PipelineConfig& config) {
  if (config.String("provider") == "builtin") {
    HashingProvider::Options o;
    o.dimension = static_cast<std::size_t>(config.Uint("embed_dimension"));
    o.window = static_cast<std::size_t>(config.Uint("embed_window"));
    o.seed = config.Uint("embed_seed");
    return std::make_unique<HashingProvider>(o);
  }
  std::string address = config.String("provider_address");
  if (address.empty()) {
    const char* env = std::getenv(kProviderAddressEnv);
    if (env != nullptr) address = env;
  }
  if (address.empty()) {
    throw ConfigError(std::string("external provider needs provider_address or ") +
                      kProviderAddressEnv);
  }
  return ConnectProvider(address);
}

std::size_t PerReferenceTarget(const PipelineConfig& config) {
  const std::size_t configured =
      static_cast<std::size_t>(config.Uint("per_reference_target"));
  if (configured > 0) return configured;
  std::size_t most = 0;
  for (const ApproachSpec& a : Approaches(config)) {
    most = std::max(most, a.synth_share);
  }
  return most;
}

}  // namespace

void CmdSelect(const PipelineConfig& config) {
  Stage stage(config, "select");
  const ParallelCorpus train = LoadSplitCorpus(stage, config, "train");
  const ParallelCorpus test = LoadSplitCorpus(stage, config, "test");

  SelectionCriteria criteria;
  criteria.min_test_count = config.Uint("min_test_count");
  criteria.min_train_count = config.Uint("min_train_count");
  criteria.max_words = config.Uint("max_words");
  criteria.count_unit = ParseCountUnit(config.String("count_unit"));
  for (const std::string& w : config.Strings("exclusions")) {
    criteria.exclusion_list.insert(config.Bool("lowercase") ? AsciiLower(w) : w);
  }
  if (const auto file = config.Path("exclusion_file")) {
    for (const Token& w : LoadWordList(stage.Input(*file))) {
      criteria.exclusion_list.insert(config.Bool("lowercase") ? AsciiLower(w) : w);
    }
  }
  const std::vector<EvaluationWord> words = SelectWords(train, test, criteria);
  stage.Write("words.json", EvaluationWordsToJson(words));
  stage.Finish();
}

void CmdFilter(const PipelineConfig& config) {
  Stage stage(config, "filter");
  const ParallelCorpus train = LoadSplitCorpus(stage, config, "train");
  const FilteredSplit split = SplitCorpus(train, ReadWords(stage));

  std::vector<SentencePair> held_out;
  for (const SentencePair& p : train.pairs()) {
    if (split.filtered_training.FindById(p.id) == nullptr) held_out.push_back(p);
  }
  if (held_out.size() != split.held_out_pairs) {
    throw DataError("held-out partition does not balance");
  }

  const OccurrenceSchedule schedule = Schedule(config);
  const std::size_t needed = schedule.steps.back();
  ordered_json references = ordered_json::object();
  for (const EvaluationWord& w : split.evaluation_words) {
    const auto& pool = split.held_out_pool.at(w.target_word);
    const std::size_t n = std::min(needed, pool.size());
    if (n < needed) {
      Warn("word '" + w.target_word + "' has " + std::to_string(pool.size()) +
           " held-out pairs, fewer than the largest step " +
           std::to_string(needed));
    }
    std::vector<PairId> ids;
    for (const SentencePair& p : SampleReferences(
             pool, n, Rng::Derive(config.seed(), "references/" + w.target_word))) {
      ids.push_back(p.id);
    }
    references[w.target_word] = ids;
  }

  WriteCorpusFiles(stage, split.filtered_training, "filtered");
  WriteCorpusFiles(stage, ParallelCorpus(std::move(held_out)), "heldout");
  ordered_json out;
  out["filtered_pairs"] = split.filtered_training.size();
  out["held_out_pairs"] = split.held_out_pairs;
  out["words"] = ordered_json::parse(EvaluationWordsToJson(split.evaluation_words));
  out["references"] = std::move(references);
  stage.Write("split.json", out.dump(2) + "\n");
  stage.Finish();
}

void CmdAlign(const PipelineConfig& config) {
  Stage stage(config, "align");
  const ParallelCorpus train = LoadSplitCorpus(stage, config, "train");
  const ParallelCorpus filtered = ReadCorpusFiles(stage, "filtered");
  const std::vector<Token> words = WordList(ReadWords(stage));

  AlignerOptions options;
  options.iterations = config.Uint("aligner_iterations");
  options.threads = config.threads();
  if (!config.values().at("aligner_tension").is_null()) {
    options.diagonal = DiagonalPrior{config.Double("aligner_tension"),
                                     config.Double("aligner_null_probability")};
  }
  const TrainResult unfiltered = TrainAligner(train, options);
  const TrainResult filtered_model = TrainAligner(filtered, options);
  const Lexicon lexicon =
      ExtractLexicon(train, unfiltered.table, words, config.threads());
  for (const Token& w : lexicon.unaligned) {
    Warn("evaluation word '" + w + "' has no aligned source word");
  }

  std::string pharaoh;
  for (const SentencePair& p : filtered.pairs()) {
    pharaoh += Align(p, filtered_model.table).ToPharaoh();
    pharaoh += '\n';
  }
  ordered_json loglik;
  loglik["unfiltered"] = unfiltered.log_likelihood;
  loglik["filtered"] = filtered_model.log_likelihood;

  stage.Write("unfiltered.ttable.tsv", unfiltered.table.ToTsv());
  stage.Write("filtered.ttable.tsv", filtered_model.table.ToTsv());
  stage.Write("filtered.align", pharaoh);
  stage.Write("lexicon.json", lexicon.ToJson());
  stage.Write("loglik.json", loglik.dump(2) + "\n");
  stage.Finish();
}

void CmdAugment(const PipelineConfig& config) {
  Stage stage(config, "augment");
  const ParallelCorpus filtered = ReadCorpusFiles(stage, "filtered");
  const ParallelCorpus held_out = ReadCorpusFiles(stage, "heldout");
  const std::vector<EvaluationWord> words = ReadWords(stage);
  const auto references = ReadReferences(stage);
  const Lexicon lexicon = Lexicon::FromJson(ReadFile(stage.InputInOut("lexicon.json")));

  const fs::path align_path = config.Path("filtered_alignments")
                                  .value_or(stage.out() / "filtered.align");
  const std::vector<std::string> lines = ReadLines(stage.Input(align_path));
  if (lines.size() != filtered.size()) {
    throw DataError(align_path.string() + " has " + std::to_string(lines.size()) +
                    " lines, filtered corpus has " +
                    std::to_string(filtered.size()));
  }
  std::unordered_map<PairId, Alignment> links;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    links.emplace(filtered[i].id, Alignment::FromPharaoh(lines[i], filtered[i].id));
  }
  const FixedAlignmentSource alignments(std::move(links));

  AugmentConfig augment;
  augment.per_reference_target = PerReferenceTarget(config);
  augment.k = config.Uint("search_k");
  augment.search.seed = Rng::Derive(config.seed(), "search");
  augment.search.min_similarity = config.Double("min_similarity");
  augment.search.threads = config.threads();

  std::vector<AugmentResult> results;
  ordered_json stats = ordered_json::array();
  if (augment.per_reference_target > 0) {
    augment.Validate();
    const std::unique_ptr<EmbeddingProvider> provider = MakeProvider(config);
    for (const EvaluationWord& w : words) {
      ordered_json entry;
      entry["word"] = w.target_word;
      if (!lexicon.Lookup(w.target_word)) {
        Warn("skipping '" + w.target_word + "': no aligned source word");
        entry["skipped"] = "no_aligned_source";
        stats.push_back(std::move(entry));
        continue;
      }
      std::vector<ReferenceQuery> queries;
      for (const SentencePair& p :
           ReferencePairs(held_out, references.at(w.target_word))) {
        const auto pos = p.target.Find(w.target_word);
        if (!pos) {
          throw DataError("reference " + std::to_string(p.id) +
                          " does not contain '" + w.target_word + "'");
        }
        queries.push_back({p, *pos});
      }
      AugmentResult r = AugmentWord(w.target_word, queries, filtered, *provider,
                                    alignments, lexicon, augment);
      entry["source_word"] = r.source_word;
      entry["attempts"] = r.attempts();
      entry["successes"] = r.successes();
      std::size_t shortfalls = 0;
      for (const ReferenceAugmentation& ra : r.references) shortfalls += ra.shortfall;
      entry["shortfall_references"] = shortfalls;
      ordered_json discards = ordered_json::object();
      for (const auto& [reason, n] : r.DiscardCounts()) {
        discards[std::string(DiscardReasonName(reason))] = n;
      }
      entry["discards"] = std::move(discards);
      stats.push_back(std::move(entry));
      results.push_back(std::move(r));
    }
  }

  std::string src;
  std::string tgt;
  for (const AugmentResult& r : results) {
    for (const ReferenceAugmentation& ra : r.references) {
      for (const SyntheticPair& s : ra.synthetics) {
        src += s.pair.source.ToString() + "\n";
        tgt += s.pair.target.ToString() + "\n";
      }
    }
  }
  ordered_json summary;
  summary["per_reference_target"] = augment.per_reference_target;
  summary["search_k"] = augment.per_reference_target > 0 ? augment.EffectiveK() : 0;
  summary["words"] = std::move(stats);

  stage.Write("synthetic.json", AugmentResultsToJson(results));
  stage.Write("synthetic.src", src);
  stage.Write("synthetic.tgt", tgt);
  stage.Write("augment.json", summary.dump(2) + "\n");
  stage.Finish();
}

void CmdBuild(const PipelineConfig& config) {
  Stage stage(config, "build");
  const ParallelCorpus filtered = ReadCorpusFiles(stage, "filtered");
  const ParallelCorpus held_out = ReadCorpusFiles(stage, "heldout");
  const std::vector<EvaluationWord> words = ReadWords(stage);
  const auto references = ReadReferences(stage);
  const std::vector<ApproachSpec> approaches = Approaches(config);

  const bool needs_synthetic = std::any_of(
      approaches.begin(), approaches.end(),
      [](const ApproachSpec& a) { return a.synth_share > 0; });
  std::map<Token, const AugmentResult*> by_word;
  std::vector<AugmentResult> results;
  if (needs_synthetic) {
    results = AugmentResultsFromJson(ReadFile(stage.InputInOut("synthetic.json")));
    for (const AugmentResult& r : results) by_word[r.word] = &r;
  }

  std::vector<WordMaterial> materials;
  for (const EvaluationWord& w : words) {
    WordMaterial m;
    m.word = w.target_word;
    m.references = ReferencePairs(held_out, references.at(w.target_word));
    if (auto it = by_word.find(w.target_word); it != by_word.end()) {
      std::map<PairId, const ReferenceAugmentation*> by_ref;
      for (const ReferenceAugmentation& ra : it->second->references) {
        by_ref[ra.reference_id] = &ra;
      }
      for (const SentencePair& ref : m.references) {
        auto r = by_ref.find(ref.id);
        m.synthetics.push_back(r == by_ref.end() ? std::vector<SyntheticPair>{}
                                                 : r->second->synthetics);
      }
    }
    materials.push_back(std::move(m));
  }

  const std::vector<FinetuneSet> sets =
      ScheduleRuns(Schedule(config), approaches, materials, filtered,
                   config.seed(), config.threads());
  ordered_json index = ordered_json::array();
  for (const FinetuneSet& set : sets) {
    const std::string stem = set.approach.FileStem(set.occurrences);
    std::string src;
    std::string tgt;
    for (const SetEntry& e : set.entries) {
      src += e.pair.source.ToString() + "\n";
      tgt += e.pair.target.ToString() + "\n";
    }
    stage.Write("sets/" + stem + ".src", src);
    stage.Write("sets/" + stem + ".tgt", tgt);
    const std::string manifest = SetManifestJson(set);
    stage.Write("sets/" + stem + ".manifest.json", manifest);
    index.push_back(ordered_json::parse(manifest));
  }
  stage.Write("sets.json", index.dump(2) + "\n");
  stage.Finish();
}

namespace {

void CheckLabel(std::string_view label) {
  if (label.empty() || label == "." || label == "..") {
    throw ConfigError("evaluation label must not be empty");
  }
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' ||
                    c == '.' || c == '(' || c == ')';
    if (!ok) {
      throw ConfigError("evaluation label '" + std::string(label) +
                        "' may only use letters, digits and _-.()");
    }
  }
}

}  // namespace

void CmdEval(const PipelineConfig& config, const fs::path& hypotheses,
             std::string_view label) {
  CheckLabel(label);
  Stage stage(config, "eval");
  const std::vector<Token> words = WordList(ReadWords(stage));
  const EvalCorpus corpus =
      EvalCorpus::Load(stage.Input(hypotheses),
                       stage.Input(config.RequiredPath("test_tgt")),
                       config.Bool("lowercase"));
  const ScoreReport report =
      Evaluate(corpus, words, std::string(label),
               ParseAveraging(config.String("averaging")));
  const std::string rel = "evals/" + std::string(label);
  stage.Write(rel + ".json", report.ToJson());
  stage.Finish(rel + ".manifest.json");
}

void CmdReport(const PipelineConfig& config) {
  Stage stage(config, "report");
  const fs::path evals = stage.out() / "evals";

  struct Row {
    std::string approach;
    std::optional<std::size_t> occurrences;
    std::string label;
    std::optional<json> scores;
  };
  std::vector<Row> rows;
  std::set<std::string> covered;
  for (const ApproachSpec& a : Approaches(config)) {
    for (std::size_t c : Schedule(config).steps) {
      rows.push_back({a.Label(), c, a.FileStem(c), std::nullopt});
      covered.insert(a.FileStem(c));
    }
  }
  std::vector<std::string> extra;
  if (fs::is_directory(evals)) {
    for (const auto& entry : fs::directory_iterator(evals)) {
      const std::string name = entry.path().filename().string();
      const std::string suffix = ".json";
      if (name.size() <= suffix.size() ||
          name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0 ||
          name.find(".manifest.json") != std::string::npos) {
        continue;
      }
      const std::string label = name.substr(0, name.size() - suffix.size());
      if (!covered.count(label)) extra.push_back(label);
    }
  }
  std::sort(extra.begin(), extra.end());
  for (const std::string& label : extra) rows.push_back({label, std::nullopt, label, std::nullopt});

  for (Row& row : rows) {
    const fs::path path = evals / (row.label + ".json");
    if (fs::exists(path)) row.scores = ParseJsonFile(stage.Input(path));
  }

  auto cell = [](const Row& row, const char* key) -> std::string {
    if (!row.scores) return "";
    return FormatDouble(row.scores->at(key).get<double>());
  };
  std::string csv = "approach,occurrences,label,bleu,accuracy,overtranslation\n";
  ordered_json table = ordered_json::array();
  for (const Row& row : rows) {
    csv += row.approach + "," +
           (row.occurrences ? std::to_string(*row.occurrences) : "") + "," +
           row.label + "," + cell(row, "overall_bleu") + "," +
           cell(row, "overall_accuracy") + "," +
           cell(row, "overall_overtranslation") + "\n";
    ordered_json j;
    j["approach"] = row.approach;
    j["occurrences"] = row.occurrences ? json(*row.occurrences) : json(nullptr);
    j["label"] = row.label;
    for (const char* key :
         {"overall_bleu", "overall_accuracy", "overall_overtranslation"}) {
      j[std::string(key).substr(8)] =
          row.scores ? row.scores->at(key) : json(nullptr);
    }
    table.push_back(std::move(j));
  }
  stage.Write("report.csv", csv);
  stage.Write("report.json", table.dump(2) + "\n");
  stage.Finish();
}

void CmdAll(const PipelineConfig& config) {
  CmdSelect(config);
  CmdFilter(config);
  CmdAlign(config);
  CmdAugment(config);
  CmdBuild(config);
}

}  // namespace fewshot
