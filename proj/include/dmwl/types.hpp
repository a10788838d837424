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

#include <optional>
#include <string>
#include <string_view>

namespace dmwl {

enum class Polarity { kPositive, kNegative };

inline std::string_view to_string(Polarity p) {
  return p == Polarity::kPositive ? "positive" : "negative";
}

inline std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::kPositive;
  if (s == "negative") return Polarity::kNegative;
  return std::nullopt;
}

inline Polarity opposite(Polarity p) {
  return p == Polarity::kPositive ? Polarity::kNegative : Polarity::kPositive;
}

// The five dataset recipes. kGeneralDM over a general corpus is also the
// recipe for the general-purpose model's training data.
enum class Strategy {
  kGeneralDM,
  kDomainDM,
  kSelfTrain,
  kGeneralDMPlusSelf,
  kDomainDMPlusSelf,
};

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kGeneralDM: return "general-dm";
    case Strategy::kDomainDM: return "domain-dm";
    case Strategy::kSelfTrain: return "self-train";
    case Strategy::kGeneralDMPlusSelf: return "general-dm-self";
    case Strategy::kDomainDMPlusSelf: return "domain-dm-self";
  }
  return "general-dm";
}

inline std::optional<Strategy> parse_strategy(std::string_view s) {
  for (auto st : {Strategy::kGeneralDM, Strategy::kDomainDM, Strategy::kSelfTrain,
                  Strategy::kGeneralDMPlusSelf, Strategy::kDomainDMPlusSelf}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

}  // namespace dmwl
