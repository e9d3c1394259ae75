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

#include "fewshot/log.h"

#include <iostream>
#include <mutex>
#include <utility>

namespace fewshot {
namespace {

std::mutex& SinkMutex() {
  static std::mutex mu;
  return mu;
}

WarningSink& Sink() {
  static WarningSink sink = [](std::string_view message) {
    std::cerr << "warning: " << message << '\n';
  };
  return sink;
}

}  // namespace

void Warn(std::string_view message) {
  std::lock_guard<std::mutex> lock(SinkMutex());
  if (Sink()) Sink()(message);
}

WarningSink SetWarningSink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(SinkMutex());
  return std::exchange(Sink(), std::move(sink));
}

struct ScopedWarningCapture::State {
  mutable std::mutex mu;
  std::vector<std::string> messages;
};

ScopedWarningCapture::ScopedWarningCapture() : state_(new State) {
  State* state = state_;
  previous_ = SetWarningSink([state](std::string_view message) {
    std::lock_guard<std::mutex> lock(state->mu);
    state->messages.emplace_back(message);
  });
}

ScopedWarningCapture::~ScopedWarningCapture() {
  SetWarningSink(std::move(previous_));
  delete state_;
}

std::vector<std::string> ScopedWarningCapture::messages() const {
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->messages;
}

}  // namespace fewshot
