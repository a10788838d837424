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

#include <stdexcept>
#include <string>

namespace dmwl {

// Broad failure class; the CLI maps each one onto an exit code.
enum class ErrorKind {
  kUsage,   // exit 1
  kData,    // exit 2
  kScorer,  // exit 3
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Stable identifier such as "DuplicateDocId" or "SchemaError".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error usage_error(std::string code, const std::string& msg) {
  return Error(ErrorKind::kUsage, std::move(code), msg);
}

inline Error data_error(std::string code, const std::string& msg) {
  return Error(ErrorKind::kData, std::move(code), msg);
}

// Failure talking to a sentence scorer.
class ScorerError : public Error {
 public:
  enum class Reason { kUnreachable, kProtocol, kReported, kTimeout };

  ScorerError(Reason reason, const std::string& msg)
      : Error(ErrorKind::kScorer, reason_code(reason), msg), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }
  bool transient() const noexcept {
    return reason_ == Reason::kUnreachable || reason_ == Reason::kTimeout;
  }

  static std::string reason_code(Reason r) {
    switch (r) {
      case Reason::kUnreachable: return "Unreachable";
      case Reason::kProtocol: return "ProtocolError";
      case Reason::kReported: return "ScorerError";
      case Reason::kTimeout: return "Timeout";
    }
    return "ScorerError";
  }

 private:
  Reason reason_;
};

}  // namespace dmwl
