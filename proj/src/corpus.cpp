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

#include "dmwl/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dmwl/error.hpp"

namespace dmwl {
namespace {

using nlohmann::json;

constexpr int kIndexVersion = 1;

json optional_to_json(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw data_error("SchemaError", where + ": field '" + key + "' must be a string");
  return it->get<std::string>();
}

std::string required_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw data_error("SchemaError", where + ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

struct DocSentences {
  std::vector<Sentence> accepted;
};

DocSentences process_document(const Document& doc, const FilterConfig& cfg) {
  DocSentences out;
  const auto raw = split_sentences(doc.text);
  for (std::size_t pos = 0; pos < raw.size(); ++pos) {
    auto res = filter_sentence(raw[pos], cfg);
    if (!res.accepted) continue;
    out.accepted.push_back(Sentence{make_sent_id(doc.doc_id, pos), raw[pos], std::move(res.tokens),
                                    doc.doc_id, doc.source, doc.topic});
  }
  return out;
}

json sentence_to_json(const Sentence& s) {
  return json{{"sent_id", s.sent_id}, {"text", s.text},   {"tokens", s.tokens},
              {"doc_id", s.doc_id},   {"source", s.source}, {"topic", optional_to_json(s.topic)}};
}

}  // namespace

void FilterConfig::validate() const {
  if (min_tokens == 0 || min_tokens > max_tokens) {
    throw usage_error("InvalidConfig", "filter requires 0 < min_tokens <= max_tokens");
  }
  if (!(lang_threshold >= 0.0 && lang_threshold <= 1.0)) {
    throw usage_error("InvalidConfig", "lang_threshold must lie in [0, 1]");
  }
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kTooShort: return "TooShort";
    case RejectReason::kTooLong: return "TooLong";
    case RejectReason::kUnbalanced: return "Unbalanced";
    case RejectReason::kNonEnglish: return "NonEnglish";
  }
  return "TooShort";
}

bool brackets_balanced(std::string_view text) {
  std::vector<char> stack;
  for (char c : text) {
    switch (c) {
      case '(':
      case '[':
      case '{':
        stack.push_back(c);
        break;
      case ')':
      case ']':
      case '}': {
        const char want = c == ')' ? '(' : (c == ']' ? '[' : '{');
        if (stack.empty() || stack.back() != want) return false;
        stack.pop_back();
        break;
      }
      default:
        break;
    }
  }
  return stack.empty();
}

FilterResult filter_sentence(std::string_view sentence, const FilterConfig& cfg,
                             const LanguageIdentifier& lang) {
  FilterResult res;
  res.tokens = tokenize(sentence);
  res.length = static_cast<std::size_t>(
      std::count_if(res.tokens.begin(), res.tokens.end(),
                    [](const std::string& t) { return is_word_token(t); }));
  if (res.length < cfg.min_tokens) {
    res.reason = RejectReason::kTooShort;
  } else if (res.length > cfg.max_tokens) {
    res.reason = RejectReason::kTooLong;
  } else if (cfg.require_balanced && !brackets_balanced(sentence)) {
    res.reason = RejectReason::kUnbalanced;
  } else if (lang.score(sentence) < cfg.lang_threshold) {
    res.reason = RejectReason::kNonEnglish;
  }
  res.accepted = !res.reason.has_value();
  return res;
}

FilterResult filter_sentence(std::string_view sentence, const FilterConfig& cfg) {
  static const HeuristicLanguageIdentifier kLang;
  return filter_sentence(sentence, cfg, kLang);
}

std::optional<std::size_t> opening_comma(const std::vector<std::string>& tokens,
                                         std::size_t max_n) {
  const auto it = std::find(tokens.begin(), tokens.end(), ",");
  if (it == tokens.end()) return std::nullopt;
  const auto idx = static_cast<std::size_t>(it - tokens.begin());
  if (idx == 0 || idx > max_n) return std::nullopt;
  return idx;
}

std::optional<std::string> SentenceIndex::prefix_key(const std::vector<std::string>& tokens) {
  const auto comma = opening_comma(tokens);
  if (!comma) return std::nullopt;
  std::string key;
  for (std::size_t i = 0; i < *comma; ++i) {
    if (i) key += ' ';
    key += to_lower(tokens[i]);
  }
  return key;
}

SentenceIndex::SentenceIndex(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {
  by_id_.reserve(sentences_.size());
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    const auto& s = sentences_[i];
    if (!by_id_.emplace(s.sent_id, i).second) {
      throw data_error("DuplicateSentId", "duplicate sentence id " + s.sent_id);
    }
    if (auto key = prefix_key(s.tokens)) {
      prefix_map_[*key].push_back(s.sent_id);
      ++source_counts_[*key][s.source];
    }
  }
  for (auto& [key, ids] : prefix_map_) std::sort(ids.begin(), ids.end());
}

const Sentence* SentenceIndex::find(std::string_view sent_id) const {
  auto it = by_id_.find(std::string(sent_id));
  return it == by_id_.end() ? nullptr : &sentences_[it->second];
}

const Sentence& SentenceIndex::at(std::string_view sent_id) const {
  if (const auto* s = find(sent_id)) return *s;
  throw data_error("UnknownSentence", "no sentence with id " + std::string(sent_id));
}

const std::vector<std::string>& SentenceIndex::sentences_with_prefix(const std::string& prefix) const {
  static const std::vector<std::string> kEmpty;
  auto it = prefix_map_.find(prefix);
  return it == prefix_map_.end() ? kEmpty : it->second;
}

std::string SentenceIndex::serialize() const {
  json doc;
  doc["format"] = "dmwl-index";
  doc["version"] = kIndexVersion;
  json sents = json::array();
  for (const auto& s : sentences_) sents.push_back(sentence_to_json(s));
  doc["sentences"] = std::move(sents);
  doc["prefix_map"] = prefix_map_;
  doc["source_counts"] = source_counts_;
  return doc.dump() + "\n";
}

SentenceIndex SentenceIndex::deserialize(std::string_view data) {
  json doc;
  try {
    doc = json::parse(data);
  } catch (const json::parse_error& e) {
    throw data_error("SchemaError", std::string("index is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "dmwl-index") {
    throw data_error("SchemaError", "not a dmwl-index file");
  }
  if (doc.value("version", 0) != kIndexVersion) {
    throw data_error("SchemaError", "unsupported index version");
  }
  std::vector<Sentence> sentences;
  const auto& arr = doc.at("sentences");
  sentences.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& js = arr[i];
    const std::string where = "sentence " + std::to_string(i);
    Sentence s;
    s.sent_id = required_string(js, "sent_id", where);
    s.text = required_string(js, "text", where);
    s.tokens = js.at("tokens").get<std::vector<std::string>>();
    s.doc_id = required_string(js, "doc_id", where);
    s.source = required_string(js, "source", where);
    s.topic = optional_string(js, "topic", where);
    sentences.push_back(std::move(s));
  }
  SentenceIndex index(std::move(sentences));
  if (doc.at("prefix_map").get<PrefixMap>() != index.prefix_map_ ||
      doc.at("source_counts").get<SourceCounts>() != index.source_counts_) {
    throw data_error("SchemaError", "index prefix tables do not match its sentences");
  }
  return index;
}

void SentenceIndex::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

SentenceIndex SentenceIndex::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

std::string make_sent_id(std::string_view doc_id, std::size_t position) {
  std::string pos = std::to_string(position);
  if (pos.size() < 4) pos.insert(0, 4 - pos.size(), '0');
  return std::string(doc_id) + "#" + pos;
}

SentenceIndex build_index(const std::vector<Document>& corpus, const FilterConfig& cfg,
                          std::size_t jobs) {
  cfg.validate();
  std::vector<const Document*> docs;
  docs.reserve(corpus.size());
  std::set<std::string_view> seen;
  for (const auto& d : corpus) {
    if (!seen.insert(d.doc_id).second) {
      throw data_error("DuplicateDocId", "duplicate doc_id '" + d.doc_id + "'");
    }
    docs.push_back(&d);
  }
  std::sort(docs.begin(), docs.end(),
            [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });

  std::vector<DocSentences> per_doc(docs.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, docs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) per_doc[i] = process_document(*docs[i], cfg);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < docs.size(); i += workers) {
          per_doc[i] = process_document(*docs[i], cfg);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<Sentence> sentences;
  for (auto& d : per_doc) {
    std::move(d.accepted.begin(), d.accepted.end(), std::back_inserter(sentences));
  }
  return SentenceIndex(std::move(sentences));
}

std::vector<Document> parse_corpus(std::string_view data) {
  std::vector<Document> docs;
  std::istringstream in{std::string(data)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (normalize_whitespace(line).empty()) continue;
    const std::string where = "corpus line " + std::to_string(lineno);
    json js;
    try {
      js = json::parse(line);
    } catch (const json::parse_error&) {
      throw data_error("SchemaError", where + ": invalid JSON");
    }
    if (!js.is_object()) throw data_error("SchemaError", where + ": expected an object");
    Document d;
    d.doc_id = required_string(js, "doc_id", where);
    d.text = required_string(js, "text", where);
    d.source = required_string(js, "source", where);
    d.topic = optional_string(js, "topic", where);
    d.date = optional_string(js, "date", where);
    if (d.doc_id.empty()) throw data_error("SchemaError", where + ": empty doc_id");
    if (d.text.empty()) throw data_error("SchemaError", where + ": empty text");
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<Document> read_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_file(path));
}

std::string serialize_corpus(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& d : docs) {
    json js{{"doc_id", d.doc_id},
            {"text", d.text},
            {"source", d.source},
            {"topic", optional_to_json(d.topic)},
            {"date", optional_to_json(d.date)}};
    out += js.dump();
    out += '\n';
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, const std::vector<Document>& docs) {
  write_file(path, serialize_corpus(docs));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("IoError", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("IoError", "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw data_error("IoError", "write failed for " + path.string());
}

}  // namespace dmwl
