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

#ifndef FEWSHOT_TESTS_TEST_UTIL_H_
#define FEWSHOT_TESTS_TEST_UTIL_H_

#include <stdlib.h>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fewshot/corpus.h"
#include "fewshot/text_io.h"

namespace fewshot::testing {

inline SentencePair MakePair(PairId id, std::string_view source,
                             std::string_view target,
                             Origin origin = Origin::kGenuine) {
  return {id, Sentence::Parse(source), Sentence::Parse(target), origin};
}

inline ParallelCorpus MakeCorpus(
    const std::vector<std::pair<std::string, std::string>>& lines,
    PairId first_id = 0) {
  std::vector<SentencePair> pairs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    pairs.push_back(MakePair(first_id + i, lines[i].first, lines[i].second));
  }
  return ParallelCorpus(std::move(pairs));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "fewshot_test_XXXXXX").string();
    path_ = ::mkdtemp(pattern.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const {
    return path_ / name;
  }
  std::filesystem::path Write(std::string_view name,
                              std::string_view contents) const {
    const auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    AtomicWriteFile(p, contents);
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace fewshot::testing

#endif  // FEWSHOT_TESTS_TEST_UTIL_H_
