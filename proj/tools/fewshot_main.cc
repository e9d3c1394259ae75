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

// Command-line driver for the rare-word adaptation pipeline.

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fewshot/error.h"
#include "fewshot/fixtures.h"
#include "fewshot/pipeline.h"
#include "fewshot/text_io.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> overrides;
};

// Adds --config plus one --<key> option per config key.
void AddConfigFlags(CLI::App* app, ConfigFlags& flags) {
  app->add_option("-c,--config", flags.config_file, "JSON config file");
  const nlohmann::json defaults = fewshot::PipelineConfig::DefaultConfigJson();
  for (const auto& [key, value] : defaults.items()) {
    const std::string name = key;
    app->add_option_function<std::string>(
        "--" + name,
        [&flags, name](const std::string& v) { flags.overrides[name] = v; },
        "override '" + name + "' (default " + value.dump() + ")");
  }
}

fewshot::PipelineConfig LoadConfig(const ConfigFlags& flags) {
  std::optional<fs::path> file;
  if (!flags.config_file.empty()) file = flags.config_file;
  return fewshot::PipelineConfig::Load(file, flags.overrides);
}

void GenerateFixture(const fs::path& dir, std::size_t words,
                     std::size_t background_train, std::size_t background_test,
                     std::uint64_t seed) {
  fewshot::PipelineFixtureSpec spec;
  spec.language.vocab_size = 40;
  spec.planted = fewshot::NewsLikePlantedWords(words, 20, 5);
  spec.background_train = background_train;
  spec.background_test = background_test;
  spec.seed = seed;
  const fewshot::PipelineFixture fixture = fewshot::GeneratePipelineFixture(spec);
  fs::create_directories(dir);
  fewshot::WritePipelineFixture(fixture, dir);
  nlohmann::ordered_json config;
  config["train_src"] = "train.src";
  config["train_tgt"] = "train.tgt";
  config["test_src"] = "test.src";
  config["test_tgt"] = "test.tgt";
  config["output_dir"] = "out";
  config["max_words"] = words;
  config["approaches"] = {"finetune", "randompad(20)", "augmented(20)",
                          "half(20)"};
  config["seed"] = seed;
  fewshot::AtomicWriteFile(dir / "config.json", config.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rare-word adaptation set builder"};
  app.set_version_flag("--version", std::string(fewshot::kVersion));
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    ConfigFlags flags;
  };
  std::map<std::string, Command> commands;
  const std::pair<const char*, const char*> kStages[] = {
      {"select", "choose evaluation words"},
      {"filter", "split off held-out pairs and sample references"},
      {"align", "train word alignments and extract the lexicon"},
      {"augment", "synthesize pairs by context search and substitution"},
      {"build", "write fine-tuning sets for every approach and step"},
      {"eval", "score a hypothesis file against the test targets"},
      {"report", "merge evaluations into a table"},
      {"all", "run select through build"},
  };
  for (const auto& [name, help] : kStages) {
    Command& c = commands[name];
    c.app = app.add_subcommand(name, help);
    AddConfigFlags(c.app, c.flags);
  }
  std::string hypotheses;
  std::string label;
  commands["eval"].app->add_option("--hyp", hypotheses, "hypothesis file")
      ->required();
  commands["eval"].app->add_option("--label", label, "evaluation label")
      ->required();

  std::string fixture_dir;
  std::size_t fixture_words = 8;
  std::size_t fixture_train = 4000;
  std::size_t fixture_test = 200;
  std::uint64_t fixture_seed = 7;
  CLI::App* gen = app.add_subcommand(
      "generate-fixture", "write a synthetic corpus and config");
  gen->add_option("--dir", fixture_dir, "output directory")->required();
  gen->add_option("--words", fixture_words, "planted evaluation words");
  gen->add_option("--background-train", fixture_train, "background train pairs");
  gen->add_option("--background-test", fixture_test, "background test pairs");
  gen->add_option("--seed", fixture_seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      GenerateFixture(fixture_dir, fixture_words, fixture_train, fixture_test,
                      fixture_seed);
      return 0;
    }
    for (auto& [name, c] : commands) {
      if (!c.app->parsed()) continue;
      const fewshot::PipelineConfig config = LoadConfig(c.flags);
      if (name == "select") fewshot::CmdSelect(config);
      if (name == "filter") fewshot::CmdFilter(config);
      if (name == "align") fewshot::CmdAlign(config);
      if (name == "augment") fewshot::CmdAugment(config);
      if (name == "build") fewshot::CmdBuild(config);
      if (name == "eval") fewshot::CmdEval(config, hypotheses, label);
      if (name == "report") fewshot::CmdReport(config);
      if (name == "all") fewshot::CmdAll(config);
    }
  } catch (const fewshot::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const fewshot::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const fewshot::Error& e) {
    std::fprintf(stderr, "protocol error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
