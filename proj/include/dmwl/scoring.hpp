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
#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dmwl/types.hpp"

namespace dmwl {

// Sentence scorer returning P(positive) per text.
class ConfidenceScorer {
 public:
  virtual ~ConfidenceScorer() = default;

  // |result| == |texts|, every value in [0, 1].
  virtual std::vector<double> score_batch(std::span<const std::string> texts) = 0;
  // Identifier recorded in dataset provenance.
  virtual std::string id() const = 0;
  // False for single-client scorers; callers then serialize batches.
  virtual bool thread_safe() const { return false; }
};

struct HighConfidenceThresholds {
  double pos_min = 0.9;
  double neg_max = 0.1;

  void validate() const;
};

enum class SentimentAssignment { kPositive, kNegative, kUndecided };
std::string_view to_string(SentimentAssignment a);

// Strict inequalities: exactly pos_min or neg_max is undecided.
SentimentAssignment classify_high_confidence(double score, const HighConfidenceThresholds& t = {});

using Lexicon = std::unordered_map<std::string, Polarity>;

// Word list behind the built-in scorer and the synthetic corpus generator.
const Lexicon& default_lexicon();
// JSON {"positive": [...], "negative": [...]}.
Lexicon parse_lexicon(std::string_view json_text);
Lexicon load_lexicon(const std::filesystem::path& path);
Lexicon swap_polarities(const Lexicon& lexicon);

// 0.5 + 0.5 * (p - q) / (p + q) over case-insensitive token hits; 0.5 when
// nothing hits.
double lexicon_score(std::string_view text, const Lexicon& lexicon);

class LexiconScorer final : public ConfidenceScorer {
 public:
  explicit LexiconScorer(Lexicon lexicon, std::string id = "lexicon")
      : lexicon_(std::move(lexicon)), id_(std::move(id)) {}

  std::vector<double> score_batch(std::span<const std::string> texts) override;
  std::string id() const override { return id_; }
  bool thread_safe() const override { return true; }

 private:
  Lexicon lexicon_;
  std::string id_;
};

struct ScoringOptions {
  std::size_t batch_size = 256;
  std::size_t jobs = 1;
};

// Scores texts in batches of at most batch_size. Batches run on up to `jobs`
// threads when the scorer is thread-safe; results keep input order either way.
std::vector<double> score_all(ConfidenceScorer& scorer, std::span<const std::string> texts,
                              const ScoringOptions& opts = {});

}  // namespace dmwl
