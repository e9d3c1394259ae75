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

#ifndef FEWSHOT_LOG_H_
#define FEWSHOT_LOG_H_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace fewshot {

using WarningSink = std::function<void(std::string_view)>;

// Emits a warning through the installed sink (stderr by default).
void Warn(std::string_view message);

// Replaces the process-wide sink; returns the previous one.
WarningSink SetWarningSink(WarningSink sink);

// Collects warnings for the lifetime of the object. Used by tests.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  std::vector<std::string> messages() const;

 private:
  struct State;
  State* state_;
  WarningSink previous_;
};

}  // namespace fewshot

#endif  // FEWSHOT_LOG_H_
