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

#include "fewshot/embed_client.h"

#include <netdb.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "fewshot/error.h"
#include "json.hpp"

namespace fewshot {
namespace {

void WriteAll(int fd, std::string_view data, bool socket) {
  while (!data.empty()) {
    const ssize_t n = socket ? ::send(fd, data.data(), data.size(), MSG_NOSIGNAL)
                             : ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("embedding provider write failed: ") +
                           std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::string ReadLineFrom(int fd, std::string& buffer) {
  for (;;) {
    const std::size_t newline = buffer.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer.substr(0, newline);
      buffer.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    char chunk[4096];
    const ssize_t n = ::read(fd, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("embedding provider read failed: ") +
                           std::strerror(errno));
    }
    if (n == 0) throw TransportError("embedding provider closed the stream");
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace

ProcessChannel::ProcessChannel(const std::string& command) {
  // Writes to a dead child must fail with EPIPE rather than kill us.
  ::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) throw TransportError("pipe() failed");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError("pipe() failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw TransportError("fork() failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  pid_ = pid;
}

ProcessChannel::~ProcessChannel() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

void ProcessChannel::WriteLine(std::string_view line) {
  std::string data(line);
  data.push_back('\n');
  WriteAll(to_child_, data, /*socket=*/false);
}

std::string ProcessChannel::ReadLine() {
  return ReadLineFrom(from_child_, buffer_);
}

TcpChannel::TcpChannel(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &result) != 0) {
    throw TransportError("cannot resolve embedding provider host " + host);
  }
  for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  ::freeaddrinfo(result);
  if (fd_ < 0) {
    throw TransportError("cannot connect to embedding provider at " + host +
                         ":" + service);
  }
}

TcpChannel::~TcpChannel() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpChannel::WriteLine(std::string_view line) {
  std::string data(line);
  data.push_back('\n');
  WriteAll(fd_, data, /*socket=*/true);
}

std::string TcpChannel::ReadLine() { return ReadLineFrom(fd_, buffer_); }

StreamEmbeddingProvider::StreamEmbeddingProvider(
    std::unique_ptr<LineChannel> channel)
    : channel_(std::move(channel)) {
  const std::string line = channel_->ReadLine();
  nlohmann::json hello;
  try {
    hello = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw TransportError("embedding handshake is not JSON: " + line);
  }
  if (!hello.is_object() || !hello.contains("dim") ||
      !hello["dim"].is_number_unsigned() || hello["dim"].get<std::size_t>() == 0) {
    throw TransportError("embedding handshake lacks a positive \"dim\": " +
                         line);
  }
  dimension_ = hello["dim"].get<std::size_t>();
  name_ = hello.value("name", std::string("external"));
}

ContextVector StreamEmbeddingProvider::Embed(const ContextQuery& query) const {
  query.Validate();
  nlohmann::json request;
  request["tokens"] = std::vector<std::string>(query.tokens.begin(),
                                               query.tokens.end());
  request["position"] = query.position;

  std::string line;
  {
    std::lock_guard<std::mutex> lock(mu_);
    channel_->WriteLine(request.dump());
    line = channel_->ReadLine();
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw TransportError("embedding reply is not JSON: " + line);
  }
  if (!reply.is_object()) {
    throw TransportError("embedding reply is not an object: " + line);
  }
  if (reply.contains("error")) {
    throw ProtocolError("embedding provider error: " +
                        reply["error"].dump());
  }
  if (!reply.contains("vector") || !reply["vector"].is_array()) {
    throw TransportError("embedding reply lacks \"vector\": " + line);
  }
  std::vector<double> values;
  values.reserve(dimension_);
  for (const auto& x : reply["vector"]) {
    if (!x.is_number()) {
      throw TransportError("embedding reply has a non-numeric component");
    }
    values.push_back(x.get<double>());
  }
  if (values.size() != dimension_) {
    throw DimensionMismatch("provider '" + name_ + "' declared dim " +
                            std::to_string(dimension_) + " but sent " +
                            std::to_string(values.size()) + " components");
  }
  return ContextVector(std::move(values), name_);
}

std::unique_ptr<EmbeddingProvider> ConnectProvider(std::string_view address) {
  if (address.starts_with("exec:")) {
    return std::make_unique<StreamEmbeddingProvider>(
        std::make_unique<ProcessChannel>(std::string(address.substr(5))));
  }
  if (address.starts_with("tcp:")) {
    const std::string_view rest = address.substr(4);
    const std::size_t colon = rest.rfind(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("tcp provider address needs HOST:PORT");
    }
    int port = 0;
    try {
      port = std::stoi(std::string(rest.substr(colon + 1)));
    } catch (const std::exception&) {
      port = -1;
    }
    if (port <= 0 || port > 65535) {
      throw ConfigError("bad port in provider address '" +
                        std::string(address) + "'");
    }
    return std::make_unique<StreamEmbeddingProvider>(
        std::make_unique<TcpChannel>(std::string(rest.substr(0, colon)),
                                     static_cast<std::uint16_t>(port)));
  }
  throw ConfigError("provider address must start with tcp: or exec: (got '" +
                    std::string(address) + "')");
}

}  // namespace fewshot
