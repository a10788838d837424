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

#include "dmwl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "dmwl/error.hpp"
#include "dmwl/rng.hpp"
#include "dmwl/scoring.hpp"
#include "dmwl/text.hpp"

namespace dmwl {
namespace {

using nlohmann::json;

Error invalid_spec(const std::string& msg) { return data_error("InvalidSpec", msg); }

enum class BodyKind { kPositive, kNegative, kNeutral, kBalanced };

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// 4-20 words; at least a third are stopwords.
std::vector<std::string> make_body(BodyKind kind, const SynthLexicon& lex, Rng& rng) {
  const auto len = static_cast<std::size_t>(rng.between(4, 20));
  const std::size_t stop = (len + 2) / 3;
  std::size_t sentiment = 0;
  std::vector<std::string> words;
  switch (kind) {
    case BodyKind::kPositive:
    case BodyKind::kNegative: {
      sentiment = static_cast<std::size_t>(rng.between(1, std::min<std::size_t>(3, len - stop)));
      const auto& pool = kind == BodyKind::kPositive ? lex.positive : lex.negative;
      for (std::size_t i = 0; i < sentiment; ++i) words.push_back(rng.pick(pool));
      break;
    }
    case BodyKind::kBalanced:
      sentiment = 2;
      words.push_back(rng.pick(lex.positive));
      words.push_back(rng.pick(lex.negative));
      break;
    case BodyKind::kNeutral:
      break;
  }
  for (std::size_t i = 0; i < stop; ++i) words.push_back(rng.pick(lex.stopwords));
  while (words.size() < len) words.push_back(rng.pick(lex.neutral));
  rng.shuffle(words);
  return words;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string pick_source(const std::vector<std::pair<std::string, double>>& sources, double total,
                        Rng& rng) {
  double x = rng.unit() * total;
  for (const auto& [name, w] : sources) {
    if (x < w) return name;
    x -= w;
  }
  // Rounding can leave x just above the last weight.
  for (auto it = sources.rbegin(); it != sources.rend(); ++it) {
    if (it->second > 0) return it->first;
  }
  return sources.back().first;
}

void validate(const std::vector<PlantSpec>& specs, const SynthLexicon& lex) {
  if (lex.positive.empty() || lex.negative.empty()) {
    throw invalid_spec("synthetic lexicon needs words of both polarities");
  }
  if (lex.neutral.empty() || lex.stopwords.empty()) {
    throw invalid_spec("synthetic lexicon needs neutral words and stopwords");
  }
  std::set<std::string> seen;
  for (const auto& s : specs) {
    if (s.dm.empty() || s.dm.find(',') != std::string::npos || tokenize(s.dm).size() > 3) {
      throw invalid_spec("planted DM '" + s.dm + "' must be 1-3 tokens without commas");
    }
    if (!seen.insert(to_lower(s.dm)).second) throw invalid_spec("DM '" + s.dm + "' planted twice");
    if (!(s.purity >= 0.0 && s.purity <= 1.0)) throw invalid_spec("purity must lie in [0, 1]");
    if (s.count < 1) throw invalid_spec("plant count must be >= 1");
    double total = 0;
    for (const auto& [name, w] : s.sources) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw invalid_spec("source weights must be >= 0");
      total += w;
    }
    if (!s.sources.empty() && !(total > 0)) throw invalid_spec("source weights sum to zero");
  }
}

}  // namespace

SynthLexicon default_synth_lexicon() {
  SynthLexicon lex;
  for (const auto& [w, p] : default_lexicon()) {
    (p == Polarity::kPositive ? lex.positive : lex.negative).push_back(w);
  }
  std::sort(lex.positive.begin(), lex.positive.end());
  std::sort(lex.negative.begin(), lex.negative.end());
  lex.neutral = {"committee", "report",  "market",   "office",    "board",    "plan",
                 "project",   "city",    "team",     "company",   "policy",   "meeting",
                 "region",    "system",  "value",    "price",     "result",   "data",
                 "service",   "budget",  "staff",    "council",   "agency",   "sector",
                 "network",   "program", "model",    "factory",   "museum",   "season",
                 "harbor",    "bridge",  "station",  "library",   "garden",   "village",
                 "school",    "announced", "reviewed", "discussed", "described", "scheduled",
                 "planned",   "opened",  "visited",  "measured",  "counted",  "shipped",
                 "printed",   "signed"};
  lex.stopwords = {"the", "a", "of", "to", "in", "on", "at", "for", "with", "from",
                   "and", "was", "is", "were", "has", "had", "it", "this", "that", "their"};
  return lex;
}

const std::vector<std::string>& default_journals() {
  static const std::vector<std::string> kJournals = {
      "journal-a", "journal-b", "journal-c", "journal-d",
      "journal-e", "journal-f", "journal-g", "journal-h",
  };
  return kJournals;
}

std::vector<Document> generate(const std::vector<PlantSpec>& specs, std::size_t background_count,
                               const SynthLexicon& lexicon, std::uint64_t seed) {
  validate(specs, lexicon);
  Rng rng(seed);

  std::vector<std::pair<std::string, double>> uniform;
  for (const auto& j : default_journals()) uniform.emplace_back(j, 1.0);

  struct Item {
    std::string text;
    std::string source;
  };
  std::vector<Item> items;

  for (const auto& spec : specs) {
    const auto& sources = spec.sources.empty() ? uniform : spec.sources;
    double total = 0;
    for (const auto& [n, w] : sources) total += w;
    const auto matching = static_cast<std::size_t>(
        std::llround(spec.purity * static_cast<double>(spec.count)));
    std::vector<bool> is_match(spec.count, false);
    std::fill(is_match.begin(), is_match.begin() + static_cast<std::ptrdiff_t>(matching), true);
    rng.shuffle(is_match);
    const std::string opener = capitalize(to_lower(spec.dm));
    for (std::size_t i = 0; i < spec.count; ++i) {
      const Polarity p = is_match[i] ? spec.polarity : opposite(spec.polarity);
      const auto body =
          make_body(p == Polarity::kPositive ? BodyKind::kPositive : BodyKind::kNegative, lexicon, rng);
      items.push_back({opener + ", " + join(body) + ".", pick_source(sources, total, rng)});
    }
  }
  for (std::size_t i = 0; i < background_count; ++i) {
    const auto kind = rng.below(2) == 0 ? BodyKind::kNeutral : BodyKind::kBalanced;
    items.push_back({capitalize(join(make_body(kind, lexicon, rng))) + ".",
                     pick_source(uniform, static_cast<double>(uniform.size()), rng)});
  }
  rng.shuffle(items);

  const std::size_t width = std::max<std::size_t>(6, std::to_string(items.size()).size());
  std::vector<Document> docs;
  docs.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string num = std::to_string(i);
    num.insert(0, width - num.size(), '0');
    docs.push_back({"synth-" + num, std::move(items[i].text), std::move(items[i].source),
                    std::string("synthetic"), std::nullopt});
  }
  return docs;
}

SynthSpec parse_synth_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error&) {
    throw invalid_spec("synth spec is not valid JSON");
  }
  SynthSpec spec;
  try {
    spec.background = doc.value("background", std::size_t{0});
    spec.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& p : doc.value("plants", json::array())) {
      PlantSpec ps;
      ps.dm = p.at("dm").get<std::string>();
      auto pol = parse_polarity(p.at("polarity").get<std::string>());
      if (!pol) throw invalid_spec("plant polarity must be 'positive' or 'negative'");
      ps.polarity = *pol;
      ps.purity = p.at("purity").get<double>();
      ps.count = p.at("count").get<std::size_t>();
      if (p.contains("sources")) {
        for (const auto& [name, w] : p["sources"].items()) ps.sources.emplace_back(name, w.get<double>());
      }
      spec.plants.push_back(std::move(ps));
    }
  } catch (const json::exception& e) {
    throw invalid_spec(std::string("malformed synth spec: ") + e.what());
  }
  return spec;
}

std::string serialize_synth_spec(const SynthSpec& spec) {
  json plants = json::array();
  for (const auto& p : spec.plants) {
    json sources = json::object();
    for (const auto& [n, w] : p.sources) sources[n] = w;
    plants.push_back({{"dm", p.dm},
                      {"polarity", std::string(to_string(p.polarity))},
                      {"purity", p.purity},
                      {"count", p.count},
                      {"sources", sources}});
  }
  return json{{"background", spec.background}, {"seed", spec.seed}, {"plants", plants}}.dump(2) + "\n";
}

}  // namespace dmwl
