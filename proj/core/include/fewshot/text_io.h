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

#ifndef FEWSHOT_TEXT_IO_H_
#define FEWSHOT_TEXT_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fewshot {

// Reads a file as LF-separated lines. A trailing newline does not produce
// an extra empty line. Throws DataError when the file cannot be opened.
std::vector<std::string> ReadLines(const std::filesystem::path& path);

std::string ReadFile(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames it into place, creating
// parent directories as needed.
void AtomicWriteFile(const std::filesystem::path& path,
                     std::string_view contents);

// Splits on runs of ASCII whitespace.
std::vector<std::string> SplitWhitespace(std::string_view text);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Shortest representation that round-trips to the same double.
std::string FormatDouble(double value);

}  // namespace fewshot

#endif  // FEWSHOT_TEXT_IO_H_
