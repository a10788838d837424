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

#include "dmwl/weak_labeling.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "dmwl/error.hpp"
#include "dmwl/text.hpp"

namespace dmwl {
namespace {

using nlohmann::json;

bool has_placeholder(const std::vector<std::string>& toks) {
  return std::any_of(toks.begin(), toks.end(), [](const std::string& t) { return is_placeholder(t); });
}

// Whether entry a should win over b for the same sentence.
bool preferred(const DMEntry& a, const DMEntry& b) {
  if (a.surface.size() != b.surface.size()) return a.surface.size() > b.surface.size();
  return a.surface < b.surface;
}

}  // namespace

std::vector<std::string> DMList::validate() const {
  std::set<std::string_view> seen;
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& e : entries) {
    const auto& s = e.surface;
    if (s.empty() || s.front() == ' ' || s.back() == ' ' || s.find(',') != std::string::npos) {
      throw data_error("SchemaError", "DM list '" + name + "': malformed surface '" + s + "'");
    }
    const auto toks = tokenize(s);
    if (toks.empty() || toks.size() > 3) {
      throw data_error("SchemaError", "DM list '" + name + "': surface '" + s + "' must have 1-3 tokens");
    }
    for (const auto& t : toks) {
      if (!is_placeholder(t) && t != to_lower(t)) {
        throw data_error("SchemaError", "DM list '" + name + "': surface '" + s + "' is not lowercased");
      }
    }
    if (!seen.insert(s).second) {
      throw data_error("SchemaError", "DM list '" + name + "': duplicate surface '" + s + "'");
    }
    (e.polarity == Polarity::kPositive ? has_pos : has_neg) = true;
  }
  std::vector<std::string> warnings;
  if (!has_pos) warnings.push_back("DM list '" + name + "' has no positive entries");
  if (!has_neg) warnings.push_back("DM list '" + name + "' has no negative entries");
  return warnings;
}

DMList general_dm_list() {
  DMList list{"L_g", {}};
  for (const char* s : {"luckily", "hopefully", "fortunately", "ideally", "happily", "thankfully"}) {
    list.entries.push_back({s, Polarity::kPositive});
  }
  for (const char* s : {"sadly", "inevitably", "unfortunately", "admittedly", "curiously"}) {
    list.entries.push_back({s, Polarity::kNegative});
  }
  return list;
}

DMList parse_dm_list(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error&) {
    throw data_error("SchemaError", "DM list is not valid JSON");
  }
  if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string() ||
      !doc.contains("entries") || !doc["entries"].is_array()) {
    throw data_error("SchemaError", "DM list needs a string 'name' and an 'entries' array");
  }
  DMList list;
  list.name = doc["name"].get<std::string>();
  for (const auto& e : doc["entries"]) {
    if (!e.is_object() || !e.contains("surface") || !e["surface"].is_string() ||
        !e.contains("polarity") || !e["polarity"].is_string()) {
      throw data_error("SchemaError", "DM list entry needs 'surface' and 'polarity' strings");
    }
    auto pol = parse_polarity(e["polarity"].get<std::string>());
    if (!pol) throw data_error("SchemaError", "DM polarity must be 'positive' or 'negative'");
    list.entries.push_back({e["surface"].get<std::string>(), *pol});
  }
  list.validate();
  return list;
}

DMList load_dm_list(const std::filesystem::path& path) { return parse_dm_list(read_file(path)); }

std::string serialize_dm_list(const DMList& list) {
  json entries = json::array();
  for (const auto& e : list.entries) {
    entries.push_back({{"surface", e.surface}, {"polarity", std::string(to_string(e.polarity))}});
  }
  return json{{"name", list.name}, {"entries", entries}}.dump(2) + "\n";
}

void save_dm_list(const std::filesystem::path& path, const DMList& list) {
  write_file(path, serialize_dm_list(list));
}

std::optional<std::string> text_after_first_comma(std::string_view text) {
  for (const auto& span : tokenize_spans(text)) {
    if (span.end - span.begin == 1 && text[span.begin] == ',') {
      std::string_view rest = text.substr(span.end);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
      if (rest.empty() || rest.front() == ',') return std::nullopt;
      return std::string(rest);
    }
  }
  return std::nullopt;
}

std::optional<std::string> match_dm_prefix(const Sentence& sentence, const DMEntry& dm,
                                           const EntityTagger& ner) {
  const auto& toks = sentence.tokens;
  const auto comma_it = std::find(toks.begin(), toks.end(), ",");
  if (comma_it == toks.begin() || comma_it == toks.end()) return std::nullopt;
  const auto comma = static_cast<std::size_t>(comma_it - toks.begin());

  const auto pattern = tokenize(dm.surface);
  if (pattern.empty()) return std::nullopt;
  std::vector<EntitySpan> spans;
  if (has_placeholder(pattern)) {
    spans = ner.tag(std::vector<std::string>(toks.begin(), comma_it));
  }

  std::size_t pos = 0;
  for (const auto& p : pattern) {
    if (pos >= comma) return std::nullopt;
    if (auto type = placeholder_type(p)) {
      auto it = std::find_if(spans.begin(), spans.end(),
                             [&](const EntitySpan& s) { return s.begin == pos && s.type == *type; });
      if (it == spans.end()) return std::nullopt;
      pos = it->end;
    } else {
      if (to_lower(toks[pos]) != p) return std::nullopt;
      ++pos;
    }
  }
  if (pos != comma) return std::nullopt;
  return text_after_first_comma(sentence.text);
}

std::vector<WeaklyLabeledExample> extract_weak_labels(const SentenceIndex& index,
                                                      const DMList& dms, const EntityTagger& ner,
                                                      Strategy tag) {
  // Best matching entry per sentence.
  std::map<std::string, const DMEntry*> best;
  auto offer = [&](const std::string& sent_id, const DMEntry& e) {
    auto [it, inserted] = best.emplace(sent_id, &e);
    if (!inserted && preferred(e, *it->second)) it->second = &e;
  };

  for (const auto& e : dms.entries) {
    if (has_placeholder(tokenize(e.surface))) {
      for (const auto& s : index.sentences()) {
        if (match_dm_prefix(s, e, ner)) offer(s.sent_id, e);
      }
    } else {
      std::string key;
      for (const auto& t : tokenize(e.surface)) key += (key.empty() ? "" : " ") + t;
      for (const auto& id : index.sentences_with_prefix(key)) offer(id, e);
    }
  }

  std::vector<WeaklyLabeledExample> out;
  out.reserve(best.size());
  for (const auto& [sent_id, entry] : best) {
    const Sentence& s = index.at(sent_id);
    auto text = match_dm_prefix(s, *entry, ner);
    if (!text) continue;
    out.push_back({std::move(*text), entry->polarity, sent_id, entry->surface, std::nullopt, tag});
  }
  return out;
}

std::string example_to_json_line(const WeaklyLabeledExample& ex) {
  json js{{"text", ex.text},
          {"label", std::string(to_string(ex.label))},
          {"sent_id", ex.sent_id},
          {"dm", ex.dm ? json(*ex.dm) : json(nullptr)},
          {"score", ex.score ? json(*ex.score) : json(nullptr)},
          {"strategy", std::string(to_string(ex.strategy))}};
  return js.dump();
}

WeaklyLabeledExample example_from_json_line(std::string_view line, std::size_t lineno) {
  const std::string where = "line " + std::to_string(lineno);
  json js;
  try {
    js = json::parse(line);
  } catch (const json::parse_error&) {
    throw data_error("SchemaError", where + ": invalid JSON");
  }
  static const std::set<std::string> kFields = {"text", "label", "sent_id", "dm", "score", "strategy"};
  if (!js.is_object() || js.size() != kFields.size()) {
    throw data_error("SchemaError", where + ": expected an example object with fields "
                                            "text, label, sent_id, dm, score, strategy");
  }
  for (const auto& [k, v] : js.items()) {
    if (!kFields.count(k)) throw data_error("SchemaError", where + ": unknown field '" + k + "'");
  }
  WeaklyLabeledExample ex;
  try {
    ex.text = js.at("text").get<std::string>();
    ex.sent_id = js.at("sent_id").get<std::string>();
    auto label = parse_polarity(js.at("label").get<std::string>());
    auto strategy = parse_strategy(js.at("strategy").get<std::string>());
    if (!label || !strategy) throw data_error("SchemaError", where + ": bad label or strategy");
    ex.label = *label;
    ex.strategy = *strategy;
    if (!js.at("dm").is_null()) ex.dm = js.at("dm").get<std::string>();
    if (!js.at("score").is_null()) ex.score = js.at("score").get<double>();
  } catch (const json::exception&) {
    throw data_error("SchemaError", where + ": field has the wrong type");
  }
  if (ex.text.empty()) throw data_error("SchemaError", where + ": empty text");
  return ex;
}

void write_examples(const std::filesystem::path& path,
                    const std::vector<WeaklyLabeledExample>& examples) {
  std::string out;
  for (const auto& ex : examples) {
    out += example_to_json_line(ex);
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace dmwl
