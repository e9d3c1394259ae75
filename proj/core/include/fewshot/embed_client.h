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

// Client side of the embedding wire protocol.
//
// Line-delimited JSON over a child process's stdio or a TCP connection:
//
//   server, once:  {"dim": 1024, "name": "..."}
//   client:        {"tokens": ["a", "b"], "position": 1}
//   server:        {"vector": [0.1, ...]}   or   {"error": "..."}

#ifndef FEWSHOT_EMBED_CLIENT_H_
#define FEWSHOT_EMBED_CLIENT_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "fewshot/embed.h"

namespace fewshot {

// Environment variable consulted for the external provider address.
inline constexpr char kProviderAddressEnv[] = "FEWSHOT_EMBED_ADDRESS";

// Bidirectional line transport. Implementations throw TransportError when
// the peer goes away.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void WriteLine(std::string_view line) = 0;
  virtual std::string ReadLine() = 0;
};

// Runs `command` under /bin/sh and talks to it over its stdin/stdout.
class ProcessChannel : public LineChannel {
 public:
  explicit ProcessChannel(const std::string& command);
  ~ProcessChannel() override;
  ProcessChannel(const ProcessChannel&) = delete;
  ProcessChannel& operator=(const ProcessChannel&) = delete;

  void WriteLine(std::string_view line) override;
  std::string ReadLine() override;

 private:
  int to_child_ = -1;
  int from_child_ = -1;
  int pid_ = -1;
  std::string buffer_;
};

class TcpChannel : public LineChannel {
 public:
  TcpChannel(const std::string& host, std::uint16_t port);
  ~TcpChannel() override;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  void WriteLine(std::string_view line) override;
  std::string ReadLine() override;

 private:
  int fd_ = -1;
  std::string buffer_;
};

// Provider backed by a remote model. Requests on one connection are
// serialised; open several providers for parallelism.
class StreamEmbeddingProvider : public EmbeddingProvider {
 public:
  // Reads and validates the handshake.
  explicit StreamEmbeddingProvider(std::unique_ptr<LineChannel> channel);

  std::size_t dimension() const override { return dimension_; }
  std::string name() const override { return name_; }
  ContextVector Embed(const ContextQuery& query) const override;

 private:
  mutable std::mutex mu_;
  std::unique_ptr<LineChannel> channel_;
  std::size_t dimension_ = 0;
  std::string name_;
};

// Opens a provider from "tcp:HOST:PORT" or "exec:COMMAND".
std::unique_ptr<EmbeddingProvider> ConnectProvider(std::string_view address);

}  // namespace fewshot

#endif  // FEWSHOT_EMBED_CLIENT_H_
