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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmwl/corpus.hpp"
#include "dmwl/ner.hpp"
#include "dmwl/types.hpp"

namespace dmwl {

struct DMEntry {
  std::string surface;  // lowercased, 1-3 tokens, may contain DATE/ORG/ORDINAL
  Polarity polarity = Polarity::kPositive;

  bool operator==(const DMEntry&) const = default;
};

struct DMList {
  std::string name;
  std::vector<DMEntry> entries;

  // Throws SchemaError on malformed or duplicate surfaces. Returns warnings
  // (e.g. a polarity with no entries) that do not make the list unusable.
  std::vector<std::string> validate() const;
  bool operator==(const DMList&) const = default;
};

// The 11-marker general list.
DMList general_dm_list();

DMList parse_dm_list(std::string_view json_text);
DMList load_dm_list(const std::filesystem::path& path);
std::string serialize_dm_list(const DMList& list);
void save_dm_list(const std::filesystem::path& path, const DMList& list);

struct WeaklyLabeledExample {
  std::string text;
  Polarity label = Polarity::kPositive;
  std::string sent_id;
  std::optional<std::string> dm;
  std::optional<double> score;
  Strategy strategy = Strategy::kGeneralDM;

  bool operator==(const WeaklyLabeledExample&) const = default;
};

// Text following the first "," token, left-trimmed; nullopt when there is
// no comma or nothing usable follows it.
std::optional<std::string> text_after_first_comma(std::string_view text);

// Matches `dm` against the opening tokens of the sentence (case-insensitive;
// placeholders consume one tagged span of their type) and returns the
// remainder after the comma with its original casing.
std::optional<std::string> match_dm_prefix(const Sentence& sentence, const DMEntry& dm,
                                           const EntityTagger& ner);

// One example per sentence whose opening matches a DM of the list. When
// several match, the longest surface wins, then the lexicographically
// smaller. Output is sorted by sent_id.
std::vector<WeaklyLabeledExample> extract_weak_labels(const SentenceIndex& index,
                                                      const DMList& dms, const EntityTagger& ner,
                                                      Strategy tag = Strategy::kGeneralDM);

// JSON object / line form shared by the weak-label and dataset files.
std::string example_to_json_line(const WeaklyLabeledExample& ex);
WeaklyLabeledExample example_from_json_line(std::string_view line, std::size_t lineno);

void write_examples(const std::filesystem::path& path,
                    const std::vector<WeaklyLabeledExample>& examples);

}  // namespace dmwl
