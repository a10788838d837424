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

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmwl/scoring.hpp"

namespace dmwl {

// Bidirectional newline-delimited text stream to a scorer process or socket.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  // Writes `line` followed by '\n'.
  virtual void send_line(std::string_view line) = 0;
  // Next line without its terminator; throws ScorerError on timeout or EOF.
  virtual std::string receive_line(std::chrono::milliseconds timeout) = 0;
};

// "exec:<shell command>" spawns a child and talks over its stdin/stdout;
// "tcp:<host>:<port>" connects a socket.
std::unique_ptr<LineChannel> open_channel(const std::string& endpoint);

struct RemoteScorerOptions {
  std::size_t batch_size = 64;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  std::chrono::milliseconds backoff{100};
};

// Client for the scorer line protocol:
//   request  {"id": uint, "texts": [str, ...]}
//   response {"id": uint, "scores": [float, ...]} | {"id": uint, "error": str}
// Unreachable and Timeout failures reopen the channel and retry with
// exponential backoff; protocol and reported errors are not retried.
// Single-client: batches are sent one at a time.
class RemoteScorer final : public ConfidenceScorer {
 public:
  explicit RemoteScorer(std::string endpoint, RemoteScorerOptions opts = {});

  std::vector<double> score_batch(std::span<const std::string> texts) override;
  std::string id() const override { return endpoint_; }

  std::size_t requests_sent() const { return requests_sent_; }

 private:
  std::vector<double> request(std::span<const std::string> texts);

  std::string endpoint_;
  RemoteScorerOptions opts_;
  std::unique_ptr<LineChannel> channel_;
  std::uint64_t next_id_ = 1;
  std::size_t requests_sent_ = 0;
};

std::vector<double> remote_score_batch(const std::string& endpoint,
                                       std::span<const std::string> texts,
                                       std::size_t batch_size,
                                       std::chrono::milliseconds timeout);

// Resolves a --scorer value: "lexicon" (built-in word list),
// "lexicon:<path>", "exec:<cmd>" or "tcp:<host>:<port>".
std::unique_ptr<ConfidenceScorer> make_scorer(const std::string& spec,
                                              const RemoteScorerOptions& opts = {});

}  // namespace dmwl
