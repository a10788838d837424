// Copyright 2026 The dmwl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dmwl/remote_scorer.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "dmwl/error.hpp"

namespace dmwl {
namespace {

using nlohmann::json;
using Reason = ScorerError::Reason;
using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

// Shared buffered reader over a file descriptor.
class FdReader {
 public:
  std::string read_line(int fd, std::chrono::milliseconds timeout) {
    const auto deadline = Clock::now() + timeout;
    while (true) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) throw ScorerError(Reason::kTimeout, "scorer did not answer in time");
      pollfd pfd{fd, POLLIN, 0};
      const int rc = ::poll(&pfd, 1, static_cast<int>(left));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw ScorerError(Reason::kUnreachable, std::string("poll failed: ") + std::strerror(errno));
      }
      if (rc == 0) throw ScorerError(Reason::kTimeout, "scorer did not answer in time");
      char chunk[4096];
      const ssize_t got = ::read(fd, chunk, sizeof chunk);
      if (got < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw ScorerError(Reason::kUnreachable, std::string("read failed: ") + std::strerror(errno));
      }
      if (got == 0) throw ScorerError(Reason::kUnreachable, "scorer closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(got));
    }
  }

 private:
  std::string buffer_;
};

void write_all(int fd, std::string_view data, bool socket) {
  while (!data.empty()) {
    const ssize_t n = socket ? ::send(fd, data.data(), data.size(), MSG_NOSIGNAL)
                             : ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ScorerError(Reason::kUnreachable, std::string("write failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

class ProcessChannel final : public LineChannel {
 public:
  explicit ProcessChannel(const std::string& command) {
    ignore_sigpipe();
    int to_child[2];
    int from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) {
      throw ScorerError(Reason::kUnreachable, "cannot create pipe");
    }
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw ScorerError(Reason::kUnreachable, "cannot create pipe");
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
      throw ScorerError(Reason::kUnreachable, "cannot fork scorer process");
    }
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    in_ = to_child[1];
    out_ = from_child[0];
  }

  ~ProcessChannel() override {
    ::close(in_);
    ::close(out_);
    for (int i = 0; i < 200; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) != 0) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }

  void send_line(std::string_view line) override {
    std::string msg(line);
    msg += '\n';
    write_all(in_, msg, false);
  }

  std::string receive_line(std::chrono::milliseconds timeout) override {
    return reader_.read_line(out_, timeout);
  }

 private:
  pid_t pid_ = -1;
  int in_ = -1;
  int out_ = -1;
  FdReader reader_;
};

class TcpChannel final : public LineChannel {
 public:
  TcpChannel(const std::string& host, const std::string& port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0 || res == nullptr) {
      throw ScorerError(Reason::kUnreachable, "cannot resolve " + host + ":" + port);
    }
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
      const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        fd_ = fd;
        break;
      }
      ::close(fd);
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) throw ScorerError(Reason::kUnreachable, "cannot connect to " + host + ":" + port);
  }

  ~TcpChannel() override { ::close(fd_); }

  void send_line(std::string_view line) override {
    std::string msg(line);
    msg += '\n';
    write_all(fd_, msg, true);
  }

  std::string receive_line(std::chrono::milliseconds timeout) override {
    return reader_.read_line(fd_, timeout);
  }

 private:
  int fd_ = -1;
  FdReader reader_;
};

}  // namespace

std::unique_ptr<LineChannel> open_channel(const std::string& endpoint) {
  if (endpoint.rfind("exec:", 0) == 0) {
    return std::make_unique<ProcessChannel>(endpoint.substr(5));
  }
  if (endpoint.rfind("tcp:", 0) == 0) {
    const std::string rest = endpoint.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size()) {
      throw usage_error("InvalidEndpoint", "tcp endpoint must look like tcp:<host>:<port>");
    }
    return std::make_unique<TcpChannel>(rest.substr(0, colon), rest.substr(colon + 1));
  }
  throw usage_error("InvalidEndpoint", "unknown scorer endpoint '" + endpoint + "'");
}

RemoteScorer::RemoteScorer(std::string endpoint, RemoteScorerOptions opts)
    : endpoint_(std::move(endpoint)), opts_(opts) {
  if (opts_.batch_size == 0) throw usage_error("InvalidConfig", "batch size must be positive");
}

std::vector<double> RemoteScorer::score_batch(std::span<const std::string> texts) {
  std::vector<double> out;
  out.reserve(texts.size());
  for (std::size_t begin = 0; begin < texts.size(); begin += opts_.batch_size) {
    const std::size_t len = std::min(opts_.batch_size, texts.size() - begin);
    auto part = request(texts.subspan(begin, len));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<double> RemoteScorer::request(std::span<const std::string> texts) {
  for (int attempt = 0;; ++attempt) {
    try {
      if (!channel_) channel_ = open_channel(endpoint_);
      const std::uint64_t id = next_id_++;
      json req{{"id", id}, {"texts", std::vector<std::string>(texts.begin(), texts.end())}};
      ++requests_sent_;
      channel_->send_line(req.dump(-1, ' ', false, json::error_handler_t::replace));
      const std::string line = channel_->receive_line(opts_.timeout);

      json resp;
      try {
        resp = json::parse(line);
      } catch (const json::parse_error&) {
        throw ScorerError(Reason::kProtocol, "scorer response is not JSON");
      }
      if (!resp.is_object() || !resp.contains("id") || !resp["id"].is_number_unsigned()) {
        throw ScorerError(Reason::kProtocol, "scorer response lacks an unsigned 'id'");
      }
      if (resp["id"].get<std::uint64_t>() != id) {
        throw ScorerError(Reason::kProtocol, "scorer response id does not match the request");
      }
      if (resp.contains("error")) {
        throw ScorerError(Reason::kReported,
                          "scorer reported: " + (resp["error"].is_string()
                                                     ? resp["error"].get<std::string>()
                                                     : resp["error"].dump()));
      }
      if (!resp.contains("scores") || !resp["scores"].is_array()) {
        throw ScorerError(Reason::kProtocol, "scorer response lacks 'scores'");
      }
      const auto& arr = resp["scores"];
      if (arr.size() != texts.size()) {
        throw ScorerError(Reason::kProtocol, "scorer returned " + std::to_string(arr.size()) +
                                                 " scores for " + std::to_string(texts.size()) +
                                                 " texts");
      }
      std::vector<double> scores;
      scores.reserve(arr.size());
      for (const auto& v : arr) {
        if (!v.is_number()) throw ScorerError(Reason::kProtocol, "non-numeric score");
        const double s = v.get<double>();
        if (!(s >= 0.0 && s <= 1.0)) throw ScorerError(Reason::kProtocol, "score outside [0, 1]");
        scores.push_back(s);
      }
      return scores;
    } catch (const ScorerError& e) {
      channel_.reset();
      if (!e.transient() || attempt >= opts_.max_retries) throw;
      std::this_thread::sleep_for(opts_.backoff * (1 << attempt));
    }
  }
}

std::vector<double> remote_score_batch(const std::string& endpoint,
                                       std::span<const std::string> texts,
                                       std::size_t batch_size,
                                       std::chrono::milliseconds timeout) {
  if (texts.empty()) return {};
  RemoteScorerOptions opts;
  opts.batch_size = batch_size;
  opts.timeout = timeout;
  RemoteScorer scorer(endpoint, opts);
  return scorer.score_batch(texts);
}

std::unique_ptr<ConfidenceScorer> make_scorer(const std::string& spec,
                                              const RemoteScorerOptions& opts) {
  if (spec == "lexicon") return std::make_unique<LexiconScorer>(default_lexicon(), "lexicon");
  if (spec.rfind("lexicon:", 0) == 0) {
    return std::make_unique<LexiconScorer>(load_lexicon(spec.substr(8)), spec);
  }
  if (spec.rfind("exec:", 0) == 0 || spec.rfind("tcp:", 0) == 0) {
    return std::make_unique<RemoteScorer>(spec, opts);
  }
  throw usage_error("InvalidEndpoint",
                    "scorer must be 'lexicon', 'lexicon:<path>', 'exec:<cmd>' or 'tcp:<host>:<port>'");
}

}  // namespace dmwl
