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

#include "dmwl/ner.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include "dmwl/error.hpp"
#include "dmwl/text.hpp"

namespace dmwl {
namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

bool capitalized(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool is_month(std::string_view lowered) {
  static const std::unordered_set<std::string_view> kMonths = {
      "jan", "january", "feb", "february", "mar", "march",  "apr",  "april",
      "may", "jun",     "june", "jul",     "july", "aug",   "august", "sep",
      "sept", "september", "oct", "october", "nov", "november", "dec", "december",
  };
  return kMonths.count(lowered) > 0;
}

// Month words that are also ordinary English words; tagged only when a day
// or year follows.
bool ambiguous_month(std::string_view lowered) {
  return lowered == "may" || lowered == "march" || lowered == "mar" || lowered == "jan" ||
         lowered == "dec";
}

bool is_weekday(std::string_view lowered) {
  static const std::unordered_set<std::string_view> kDays = {
      "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
  };
  return kDays.count(lowered) > 0;
}

bool is_relative_day(std::string_view lowered) {
  return lowered == "today" || lowered == "yesterday" || lowered == "tomorrow";
}

bool is_year(std::string_view s) {
  if (s.size() != 4 || !all_digits(s)) return false;
  const int y = to_int(s);
  return y >= 1000 && y <= 2999;
}

// "9th", "21st"
bool is_numeric_ordinal(std::string_view lowered) {
  if (lowered.size() < 3) return false;
  const auto suffix = lowered.substr(lowered.size() - 2);
  if (suffix != "st" && suffix != "nd" && suffix != "rd" && suffix != "th") return false;
  return all_digits(lowered.substr(0, lowered.size() - 2));
}

bool is_word_ordinal(std::string_view lowered) {
  static const std::unordered_set<std::string_view> kWords = {
      "first",      "second",     "third",      "fourth",     "fifth",
      "sixth",      "seventh",    "eighth",     "ninth",      "tenth",
      "eleventh",   "twelfth",    "thirteenth", "fourteenth", "fifteenth",
      "sixteenth",  "seventeenth", "eighteenth", "nineteenth", "twentieth",
  };
  return kWords.count(lowered) > 0;
}

bool is_day_number(std::string_view lowered) {
  if (all_digits(lowered) && lowered.size() <= 2) {
    const int d = to_int(lowered);
    return d >= 1 && d <= 31;
  }
  if (is_numeric_ordinal(lowered)) {
    const int d = to_int(lowered.substr(0, lowered.size() - 2));
    return d >= 1 && d <= 31;
  }
  return false;
}

// 10/2/2020, 2020-10-02, 3.4.21, 10/2
bool is_digit_date(std::string_view s) {
  char sep = 0;
  int groups = 0;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    const std::size_t len = j - i;
    if (len == 0 || len > 4) return false;
    ++groups;
    if (j == s.size()) break;
    const char c = s[j];
    if (c != '/' && c != '-' && c != '.') return false;
    if (sep == 0) sep = c;
    if (c != sep) return false;
    i = j + 1;
  }
  return groups == 2 || groups == 3;
}

// Length of a DATE starting at pos, or 0.
std::size_t match_date(const std::vector<std::string>& tokens,
                       const std::vector<std::string>& lower, std::size_t pos) {
  const std::size_t n = tokens.size();
  const auto& w = lower[pos];
  if (is_digit_date(w)) return 1;
  if (is_relative_day(w)) return 1;
  if (is_weekday(w) && capitalized(tokens[pos])) return 1;

  if (is_month(w) && capitalized(tokens[pos])) {
    std::size_t end = pos + 1;
    if (end < n && lower[end] == "." && w.size() <= 4) ++end;
    bool has_tail = false;
    if (end < n && is_day_number(lower[end])) {
      ++end;
      has_tail = true;
    }
    if (end < n && is_year(lower[end])) {
      ++end;
      has_tail = true;
    }
    if (!has_tail && ambiguous_month(w)) return 0;
    return end - pos;
  }

  // Day-first: "9 September 2020", "9th of May"
  if (is_day_number(w)) {
    std::size_t m = pos + 1;
    if (m < n && lower[m] == "of") ++m;
    if (m < n && is_month(lower[m]) && capitalized(tokens[m])) {
      std::size_t end = m + 1;
      if (end < n && is_year(lower[end])) ++end;
      return end - pos;
    }
  }

  if (is_year(w)) return 1;
  return 0;
}

}  // namespace

std::string_view placeholder(EntityType type) {
  switch (type) {
    case EntityType::kDate: return "DATE";
    case EntityType::kOrg: return "ORG";
    case EntityType::kOrdinal: return "ORDINAL";
  }
  return "DATE";
}

std::optional<EntityType> placeholder_type(std::string_view token) {
  if (token == "DATE") return EntityType::kDate;
  if (token == "ORG") return EntityType::kOrg;
  if (token == "ORDINAL") return EntityType::kOrdinal;
  return std::nullopt;
}

Gazetteer::Gazetteer(const std::vector<std::string>& names) {
  for (const auto& name : names) {
    auto toks = tokenize(to_lower(name));
    if (!toks.empty()) names_.push_back(std::move(toks));
  }
  std::stable_sort(names_.begin(), names_.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("IoError", "cannot read gazetteer " + path.string());
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    const std::string trimmed = normalize_whitespace(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    names.push_back(trimmed);
  }
  return Gazetteer(names);
}

std::size_t Gazetteer::match_at(const std::vector<std::string>& tokens, std::size_t pos) const {
  for (const auto& name : names_) {
    if (pos + name.size() > tokens.size()) continue;
    bool ok = true;
    for (std::size_t k = 0; k < name.size() && ok; ++k) {
      ok = to_lower(tokens[pos + k]) == name[k];
    }
    if (ok) return name.size();
  }
  return 0;
}

bool Gazetteer::mentions_any(const std::vector<std::string>& tokens) const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (match_at(tokens, i) > 0) return true;
  }
  return false;
}

std::vector<EntitySpan> PatternEntityTagger::tag(const std::vector<std::string>& tokens) const {
  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  for (const auto& t : tokens) lower.push_back(to_lower(t));

  std::vector<EntitySpan> spans;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (is_placeholder(tokens[i])) {
      ++i;
      continue;
    }
    if (std::size_t len = gazetteer_.match_at(tokens, i); len > 0) {
      spans.push_back({i, i + len, EntityType::kOrg});
      i += len;
      continue;
    }
    if (std::size_t len = match_date(tokens, lower, i); len > 0) {
      spans.push_back({i, i + len, EntityType::kDate});
      i += len;
      continue;
    }
    if (is_numeric_ordinal(lower[i]) || is_word_ordinal(lower[i])) {
      spans.push_back({i, i + 1, EntityType::kOrdinal});
      ++i;
      continue;
    }
    ++i;
  }
  return spans;
}

std::vector<std::string> normalize_tokens(const std::vector<std::string>& tokens,
                                          const EntityTagger& tagger) {
  auto spans = tagger.tag(tokens);
  std::vector<std::string> out;
  std::size_t s = 0;
  for (std::size_t i = 0; i < tokens.size();) {
    while (s < spans.size() && spans[s].end <= i) ++s;
    const bool placeholder_inside =
        s < spans.size() &&
        std::any_of(tokens.begin() + static_cast<std::ptrdiff_t>(spans[s].begin),
                    tokens.begin() + static_cast<std::ptrdiff_t>(spans[s].end),
                    [](const std::string& t) { return is_placeholder(t); });
    if (s < spans.size() && spans[s].begin == i && !placeholder_inside) {
      out.emplace_back(placeholder(spans[s].type));
      i = spans[s].end;
      continue;
    }
    out.push_back(is_placeholder(tokens[i]) ? tokens[i] : to_lower(tokens[i]));
    ++i;
  }
  return out;
}

std::string normalize_pattern(const std::vector<std::string>& tokens, const EntityTagger& tagger) {
  std::string out;
  for (const auto& t : normalize_tokens(tokens, tagger)) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace dmwl
