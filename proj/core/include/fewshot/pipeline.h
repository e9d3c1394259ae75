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

#ifndef FEWSHOT_PIPELINE_H_
#define FEWSHOT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fewshot {

inline constexpr char kVersion[] = "0.1.0";

// Flat key/value configuration. Values start from DefaultConfigJson(), are
// overlaid by the config file and then by command-line overrides.
class PipelineConfig {
 public:
  static nlohmann::json DefaultConfigJson();

  // Relative paths in `file` resolve against the file's directory; relative
  // paths in `overrides` against the working directory. Unknown keys and
  // wrongly typed values throw ConfigError.
  static PipelineConfig Load(
      const std::optional<std::filesystem::path>& file,
      const std::map<std::string, std::string>& overrides = {});
  static PipelineConfig FromJson(const nlohmann::json& values,
                                 const std::filesystem::path& base_dir);

  const nlohmann::json& values() const { return values_; }

  std::string String(std::string_view key) const;
  std::int64_t Int(std::string_view key) const;
  std::uint64_t Uint(std::string_view key) const;
  double Double(std::string_view key) const;
  bool Bool(std::string_view key) const;
  std::vector<std::string> Strings(std::string_view key) const;
  std::optional<std::filesystem::path> Path(std::string_view key) const;
  // Throws ConfigError when the key is unset or the file is missing.
  std::filesystem::path RequiredPath(std::string_view key) const;

  std::filesystem::path output_dir() const;
  std::uint64_t seed() const { return Uint("seed"); }
  int threads() const { return static_cast<int>(Int("threads")); }

  // Every key except output_dir, in key order.
  nlohmann::json ManifestView() const;

 private:
  nlohmann::json values_;
};

// Keys whose values are filesystem paths.
bool IsPathKey(std::string_view key);

void CmdSelect(const PipelineConfig& config);
void CmdFilter(const PipelineConfig& config);
void CmdAlign(const PipelineConfig& config);
void CmdAugment(const PipelineConfig& config);
void CmdBuild(const PipelineConfig& config);
void CmdEval(const PipelineConfig& config,
             const std::filesystem::path& hypotheses, std::string_view label);
void CmdReport(const PipelineConfig& config);

// Runs select through build.
void CmdAll(const PipelineConfig& config);

}  // namespace fewshot

#endif  // FEWSHOT_PIPELINE_H_
