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

#include "dmwl/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace dmwl {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool is_closing(std::string_view t) {
  static constexpr std::string_view kClosing = ".,;:!?)]}%'";
  return t.size() == 1 && kClosing.find(t[0]) != std::string_view::npos;
}

bool is_opening(std::string_view t) {
  static constexpr std::string_view kOpening = "([{$#@";
  return t.size() == 1 && kOpening.find(t[0]) != std::string_view::npos;
}

const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> kAbbrev = {
      "mr.",   "mrs.",  "ms.",   "dr.",   "prof.", "sr.",   "jr.",  "st.",
      "mt.",   "vs.",   "etc.",  "e.g.",  "i.e.",  "u.s.",  "u.k.", "u.n.",
      "inc.",  "corp.", "co.",   "ltd.",  "gen.",  "gov.",  "sen.", "rep.",
      "jan.",  "feb.",  "mar.",  "apr.",  "jun.",  "jul.",  "aug.", "sep.",
      "sept.", "oct.",  "nov.",  "dec.",  "no.",   "fig.",  "dept.", "approx.",
      "a.m.",  "p.m.",
  };
  return kAbbrev;
}

// Word ending at `dot` (inclusive), lowercased, with leading brackets/quotes
// removed.
std::string word_ending_at(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !is_space(text[b - 1])) --b;
  while (b < dot && (text[b] == '(' || text[b] == '"' || text[b] == '\'' || text[b] == '[')) ++b;
  return to_lower(text.substr(b, dot - b + 1));
}

bool guarded_by_abbreviation(std::string_view text, std::size_t dot) {
  const std::string w = word_ending_at(text, dot);
  if (abbreviations().count(w)) return true;
  // Single-letter initial such as "J."
  return w.size() == 2 && std::isalpha(static_cast<unsigned char>(w[0]));
}

// Decodes one UTF-8 code point starting at i; advances i. Invalid bytes
// decode as themselves.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto c0 = static_cast<unsigned char>(s[i]);
  int extra = 0;
  char32_t cp = c0;
  if (c0 >= 0xF0) {
    extra = 3;
    cp = c0 & 0x07;
  } else if (c0 >= 0xE0) {
    extra = 2;
    cp = c0 & 0x0F;
  } else if (c0 >= 0xC0) {
    extra = 1;
    cp = c0 & 0x1F;
  }
  ++i;
  for (int k = 0; k < extra && i < s.size(); ++k, ++i) {
    cp = (cp << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
  }
  return cp;
}

bool is_non_ascii_letter(char32_t cp) {
  if (cp < 0xC0 || cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE00 && cp <= 0xFE6F) return false;
  if (cp >= 0x1F000) return false;                  // emoji and pictographs
  return true;
}

}  // namespace

std::vector<TokenSpan> tokenize_spans(std::string_view text) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t b = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    std::size_t e = i;
    while (b < e && is_punct(text[b])) {
      out.push_back({b, b + 1});
      ++b;
    }
    std::size_t core_end = e;
    while (core_end > b && is_punct(text[core_end - 1])) --core_end;
    if (core_end > b) out.push_back({b, core_end});
    for (std::size_t p = core_end; p < e; ++p) out.push_back({p, p + 1});
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& span : tokenize_spans(text)) {
    out.emplace_back(text.substr(span.begin, span.end - span.begin));
  }
  return out;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  bool glue_next = true;
  bool quote_open = false;
  for (const auto& t : tokens) {
    bool attach_left = glue_next;
    bool attach_right = false;
    if (t == "\"") {
      if (quote_open) {
        attach_left = true;
      } else {
        attach_right = true;
      }
      quote_open = !quote_open;
    } else if (is_closing(t)) {
      attach_left = true;
    } else if (is_opening(t)) {
      attach_right = true;
    }
    if (!attach_left && !out.empty()) out += ' ';
    out += t;
    glue_next = attach_right;
  }
  return out;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view raw) {
  const std::string text = normalize_whitespace(raw);
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    const bool single_period = (j == i + 1 && c == '.');
    std::size_t k = j;
    while (k < n && (text[k] == '"' || text[k] == '\'' || text[k] == ')' || text[k] == ']')) ++k;
    bool boundary = false;
    if (k == n) {
      boundary = true;
    } else if (text[k] == ' ' && k + 1 < n) {
      std::size_t m = k + 1;
      if ((text[m] == '"' || text[m] == '(' || text[m] == '\'') && m + 1 < n) ++m;
      boundary = is_upper(text[m]);
    }
    if (boundary && single_period && guarded_by_abbreviation(text, i)) boundary = false;
    if (boundary) {
      out.push_back(normalize_whitespace(std::string_view(text).substr(start, k - start)));
      start = k;
    }
    i = k > i ? k : i + 1;
  }
  if (start < n) {
    std::string rest = normalize_whitespace(std::string_view(text).substr(start));
    if (!rest.empty()) out.push_back(std::move(rest));
  }
  return out;
}

bool is_punctuation_token(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), is_punct);
}

bool is_word_token(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u);
  });
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

const std::vector<std::string>& english_stopwords() {
  static const std::vector<std::string> kWords = {
      "the",  "a",    "an",    "and",   "or",   "but",  "if",   "of",   "to",   "in",
      "on",   "at",   "by",    "for",   "with", "from", "up",   "down", "out",  "over",
      "about", "as",  "is",    "are",   "was",  "were", "be",   "been", "has",  "have",
      "had",  "do",   "it",    "its",   "this", "that", "these", "those", "he",  "she",
      "they", "we",   "you",   "his",   "her",  "their", "our", "not",  "no",   "will",
  };
  return kWords;
}

bool is_english_stopword(std::string_view lowered) {
  static const std::unordered_set<std::string_view> kSet = [] {
    std::unordered_set<std::string_view> s;
    for (const auto& w : english_stopwords()) s.insert(w);
    return s;
  }();
  return kSet.count(lowered) > 0;
}

double HeuristicLanguageIdentifier::score(std::string_view text) const {
  std::size_t ascii_letters = 0;
  std::size_t other_letters = 0;
  for (std::size_t i = 0; i < text.size();) {
    const char32_t cp = next_code_point(text, i);
    if (cp < 0x80) {
      if (std::isalpha(static_cast<int>(cp))) ++ascii_letters;
    } else if (is_non_ascii_letter(cp)) {
      ++other_letters;
    }
  }
  const std::size_t letters = ascii_letters + other_letters;
  const double ascii_share =
      letters == 0 ? 0.0 : static_cast<double>(ascii_letters) / static_cast<double>(letters);

  std::size_t words = 0;
  std::size_t stop = 0;
  for (const auto& tok : tokenize(text)) {
    if (!is_word_token(tok)) continue;
    ++words;
    if (is_english_stopword(to_lower(tok))) ++stop;
  }
  const double stop_share =
      words == 0 ? 0.0 : static_cast<double>(stop) / static_cast<double>(words);
  const double stop_signal = std::min(1.0, stop_share / kStopwordSaturation);
  return std::clamp(0.5 * ascii_share + 0.5 * stop_signal, 0.0, 1.0);
}

double language_score(std::string_view text) {
  static const HeuristicLanguageIdentifier kDefault;
  return kDefault.score(text);
}

}  // namespace dmwl
