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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dmwl {

enum class EntityType { kDate, kOrg, kOrdinal };

// Placeholder token written into normalized patterns: "DATE", "ORG", "ORDINAL".
std::string_view placeholder(EntityType type);
std::optional<EntityType> placeholder_type(std::string_view token);
inline bool is_placeholder(std::string_view token) {
  return placeholder_type(token).has_value();
}

// Half-open token range [begin, end).
struct EntitySpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  EntityType type = EntityType::kDate;

  bool operator==(const EntitySpan&) const = default;
};

// Company names, matched as case-insensitive whole-token sequences.
class Gazetteer {
 public:
  Gazetteer() = default;
  explicit Gazetteer(const std::vector<std::string>& names);

  // One name per line; blank lines and lines starting with '#' are ignored.
  static Gazetteer load(const std::filesystem::path& path);

  bool empty() const { return names_.empty(); }
  std::size_t size() const { return names_.size(); }

  // Length in tokens of the longest name starting at tokens[pos], or 0.
  std::size_t match_at(const std::vector<std::string>& tokens, std::size_t pos) const;
  bool mentions_any(const std::vector<std::string>& tokens) const;

 private:
  std::vector<std::vector<std::string>> names_;  // lowercased tokens, longest first
};

class EntityTagger {
 public:
  virtual ~EntityTagger() = default;
  // Non-overlapping spans in increasing order.
  virtual std::vector<EntitySpan> tag(const std::vector<std::string>& tokens) const = 0;
};

// Pattern recognizers for DATE (month names with optional day/year, weekday
// names, digit shapes such as 10/2/2020 or 2020-10-02, bare years) and
// ORDINAL (first..twentieth, 1st/2nd/3rd/Nth). ORG comes from the gazetteer.
class PatternEntityTagger final : public EntityTagger {
 public:
  PatternEntityTagger() = default;
  explicit PatternEntityTagger(Gazetteer gazetteer) : gazetteer_(std::move(gazetteer)) {}

  std::vector<EntitySpan> tag(const std::vector<std::string>& tokens) const override;

 private:
  Gazetteer gazetteer_;
};

// Lowercases the tokens and replaces every tagged span with its placeholder.
// Tokens that already are placeholders are kept, so normalization is
// idempotent.
std::vector<std::string> normalize_tokens(const std::vector<std::string>& tokens,
                                          const EntityTagger& tagger);
std::string normalize_pattern(const std::vector<std::string>& tokens, const EntityTagger& tagger);

}  // namespace dmwl
