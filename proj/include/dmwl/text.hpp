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
#include <string>
#include <string_view>
#include <vector>

namespace dmwl {

// Byte range [begin, end) of one token inside the tokenized text.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Whitespace tokenizer that detaches leading and trailing ASCII punctuation
// from every chunk, one character per token. Punctuation inside a chunk
// (apostrophes, hyphens, slashes, "1,000") stays attached.
std::vector<TokenSpan> tokenize_spans(std::string_view text);
std::vector<std::string> tokenize(std::string_view text);

// Inverse of tokenize() for text written with conventional spacing: closing
// punctuation attaches left, opening brackets attach right, straight double
// quotes alternate between opening and closing.
std::string detokenize(const std::vector<std::string>& tokens);

// Collapses every whitespace run to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

// Splits on . ! ? followed by whitespace and an uppercase letter (or end of
// text), unless the period closes a known abbreviation or an initial.
// Returned sentences are whitespace-normalized.
std::vector<std::string> split_sentences(std::string_view text);

bool is_punctuation_token(std::string_view token);
// True when the token holds at least one ASCII alphanumeric or non-ASCII byte.
bool is_word_token(std::string_view token);

std::string to_lower(std::string_view s);

// The 50-word list behind the built-in language heuristic.
const std::vector<std::string>& english_stopwords();
bool is_english_stopword(std::string_view lowered);

// Probability-like score that a text is English.
class LanguageIdentifier {
 public:
  virtual ~LanguageIdentifier() = default;
  virtual double score(std::string_view text) const = 0;
};

// 0.5 * (ASCII letters / all letters) + 0.5 * stopword signal, where the
// stopword signal is the stopword share of word tokens divided by
// kStopwordSaturation and capped at 1. Empty text scores 0.
class HeuristicLanguageIdentifier final : public LanguageIdentifier {
 public:
  static constexpr double kStopwordSaturation = 0.25;
  double score(std::string_view text) const override;
};

double language_score(std::string_view text);

}  // namespace dmwl
