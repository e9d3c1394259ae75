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

#ifndef FEWSHOT_ERROR_H_
#define FEWSHOT_ERROR_H_

#include <stdexcept>
#include <string>

namespace fewshot {

// Broad failure classes. The CLI maps each to its own exit code.
enum class ErrorKind { kConfig, kData, kProtocol };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, bool retriable = false)
      : std::runtime_error(message), kind_(kind), retriable_(retriable) {}

  ErrorKind kind() const { return kind_; }
  bool retriable() const { return retriable_; }

 private:
  ErrorKind kind_;
  bool retriable_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorKind::kConfig, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::kData, message) {}
};

// Non-retriable failure reported by a peer (e.g. an {"error": ...} reply).
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& message, bool retriable = false)
      : Error(ErrorKind::kProtocol, message, retriable) {}
};

// Peer unreachable, connection dropped, or malformed traffic. Retriable.
class TransportError : public ProtocolError {
 public:
  explicit TransportError(const std::string& message)
      : ProtocolError(message, /*retriable=*/true) {}
};

// Vectors from different embedding spaces met. Never retriable.
class DimensionMismatch : public ProtocolError {
 public:
  explicit DimensionMismatch(const std::string& message)
      : ProtocolError(message, /*retriable=*/false) {}
};

}  // namespace fewshot

#endif  // FEWSHOT_ERROR_H_
