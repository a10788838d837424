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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dmwl/text.hpp"

namespace dmwl {

struct Document {
  std::string doc_id;
  std::string text;
  std::string source;
  std::optional<std::string> topic;
  std::optional<std::string> date;

  bool operator==(const Document&) const = default;
};

struct Sentence {
  std::string sent_id;
  std::string text;
  std::vector<std::string> tokens;
  std::string doc_id;
  std::string source;
  std::optional<std::string> topic;

  bool operator==(const Sentence&) const = default;
};

struct FilterConfig {
  std::size_t min_tokens = 3;
  std::size_t max_tokens = 32;
  double lang_threshold = 0.75;
  bool require_balanced = true;

  // Throws a usage Error ("InvalidConfig") when the bounds are inconsistent.
  void validate() const;
};

enum class RejectReason { kTooShort, kTooLong, kUnbalanced, kNonEnglish };
std::string_view to_string(RejectReason r);

struct FilterResult {
  bool accepted = false;
  std::optional<RejectReason> reason;
  std::vector<std::string> tokens;
  // Word tokens only; punctuation tokens are not counted against the bounds.
  std::size_t length = 0;
};

bool brackets_balanced(std::string_view text);

// Length gate, then bracket balance, then the language gate.
FilterResult filter_sentence(std::string_view sentence, const FilterConfig& cfg,
                             const LanguageIdentifier& lang);
FilterResult filter_sentence(std::string_view sentence, const FilterConfig& cfg = {});

// Index of the first "," token when it closes an opening n-gram of length
// 1..max_n, otherwise nullopt.
std::optional<std::size_t> opening_comma(const std::vector<std::string>& tokens,
                                         std::size_t max_n = 3);

// Immutable collection of accepted sentences, keyed by their lowercased
// comma-adjacent opening n-gram.
class SentenceIndex {
 public:
  using PrefixMap = std::map<std::string, std::vector<std::string>>;
  using SourceCounts = std::map<std::string, std::map<std::string, std::size_t>>;

  SentenceIndex() = default;
  explicit SentenceIndex(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  std::size_t size() const { return sentences_.size(); }
  const Sentence* find(std::string_view sent_id) const;
  const Sentence& at(std::string_view sent_id) const;

  // Sorted sent_ids per prefix.
  const PrefixMap& prefix_map() const { return prefix_map_; }
  const std::vector<std::string>& sentences_with_prefix(const std::string& prefix) const;
  const SourceCounts& source_counts() const { return source_counts_; }

  static std::optional<std::string> prefix_key(const std::vector<std::string>& tokens);

  std::string serialize() const;
  static SentenceIndex deserialize(std::string_view data);
  void save(const std::filesystem::path& path) const;
  static SentenceIndex load(const std::filesystem::path& path);

 private:
  std::vector<Sentence> sentences_;
  std::unordered_map<std::string, std::size_t> by_id_;
  PrefixMap prefix_map_;
  SourceCounts source_counts_;
};

// Sentence ids are "<doc_id>#<position>" with the position zero-padded to
// four digits and counted over all split sentences, accepted or not.
std::string make_sent_id(std::string_view doc_id, std::size_t position);

// Documents are processed in doc_id order; `jobs` worker threads split the
// work and the merge keeps that order, so the result does not depend on it.
SentenceIndex build_index(const std::vector<Document>& corpus, const FilterConfig& cfg = {},
                          std::size_t jobs = 1);

// Newline-delimited JSON corpus files.
std::vector<Document> read_corpus(const std::filesystem::path& path);
std::vector<Document> parse_corpus(std::string_view data);
std::string serialize_corpus(const std::vector<Document>& docs);
void write_corpus(const std::filesystem::path& path, const std::vector<Document>& docs);

// Small helpers shared by the file writers.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

}  // namespace dmwl
