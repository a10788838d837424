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

#include "dmwl/dataset.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "dmwl/error.hpp"
#include "dmwl/rng.hpp"

namespace dmwl {
namespace {

using nlohmann::json;

constexpr int kDatasetVersion = 1;

bool agrees(SentimentAssignment a, Polarity p) {
  return (a == SentimentAssignment::kPositive && p == Polarity::kPositive) ||
         (a == SentimentAssignment::kNegative && p == Polarity::kNegative);
}

const DMList& require_list(Strategy s, const BuildInputs& in) {
  const bool general = s == Strategy::kGeneralDM || s == Strategy::kGeneralDMPlusSelf;
  const DMList* list = general ? in.general : in.domain;
  if (list == nullptr) {
    throw usage_error("MissingDMList", std::string("strategy ") + std::string(to_string(s)) +
                                           " needs the " + (general ? "general" : "domain") +
                                           " DM list");
  }
  return *list;
}

ConfidenceScorer& require_scorer(Strategy s, const BuildInputs& in) {
  if (in.scorer == nullptr) {
    throw usage_error("MissingScorer",
                      std::string("strategy ") + std::string(to_string(s)) + " needs a scorer");
  }
  return *in.scorer;
}

Dataset make_subset(const Dataset& parent, std::vector<WeaklyLabeledExample> examples) {
  std::sort(examples.begin(), examples.end(),
            [](const auto& a, const auto& b) { return a.sent_id < b.sent_id; });
  return Dataset{std::move(examples), parent.strategy, parent.provenance};
}

}  // namespace

LabelCounts Dataset::counts() const {
  LabelCounts c;
  for (const auto& ex : examples) (ex.label == Polarity::kPositive ? c.positive : c.negative) += 1;
  return c;
}

Dataset build_dataset(Strategy strategy, const SentenceIndex& index, const BuildInputs& inputs) {
  static const PatternEntityTagger kDefaultTagger;
  const EntityTagger& ner = inputs.ner ? *inputs.ner : kDefaultTagger;

  Dataset ds;
  ds.strategy = strategy;
  ds.provenance.corpus = inputs.corpus_name;
  ds.provenance.seed = inputs.seed;

  const bool uses_dms = strategy != Strategy::kSelfTrain;
  const bool uses_scorer = strategy == Strategy::kSelfTrain ||
                           strategy == Strategy::kGeneralDMPlusSelf ||
                           strategy == Strategy::kDomainDMPlusSelf;

  // Check every precondition before doing any work.
  const DMList* list = uses_dms ? &require_list(strategy, inputs) : nullptr;
  ConfidenceScorer* scorer = uses_scorer ? &require_scorer(strategy, inputs) : nullptr;
  if (uses_scorer) inputs.thresholds.validate();
  if (list) ds.provenance.dm_lists.push_back(list->name);
  if (scorer) ds.provenance.scorer = scorer->id();

  if (strategy == Strategy::kSelfTrain) {
    std::vector<std::string> texts;
    texts.reserve(index.size());
    for (const auto& s : index.sentences()) texts.push_back(s.text);
    const auto scores = score_all(*scorer, texts, inputs.scoring);
    for (std::size_t i = 0; i < index.size(); ++i) {
      const auto a = classify_high_confidence(scores[i], inputs.thresholds);
      if (a == SentimentAssignment::kUndecided) continue;
      const auto& s = index.sentences()[i];
      ds.examples.push_back({s.text,
                             a == SentimentAssignment::kPositive ? Polarity::kPositive
                                                                 : Polarity::kNegative,
                             s.sent_id, std::nullopt, scores[i], strategy});
    }
    std::sort(ds.examples.begin(), ds.examples.end(),
              [](const auto& a, const auto& b) { return a.sent_id < b.sent_id; });
    return ds;
  }

  auto examples = extract_weak_labels(index, *list, ner, strategy);
  if (!scorer) {
    ds.examples = std::move(examples);
    return ds;
  }

  std::vector<std::string> texts;
  texts.reserve(examples.size());
  for (const auto& ex : examples) texts.push_back(ex.text);
  const auto scores = score_all(*scorer, texts, inputs.scoring);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (!agrees(classify_high_confidence(scores[i], inputs.thresholds), examples[i].label)) continue;
    examples[i].score = scores[i];
    ds.examples.push_back(std::move(examples[i]));
  }
  return ds;
}

DatasetSplit split_dataset(const Dataset& dataset, std::uint64_t seed) {
  if (dataset.examples.empty()) throw data_error("EmptyDataset", "cannot split an empty dataset");
  std::vector<const WeaklyLabeledExample*> order;
  order.reserve(dataset.examples.size());
  for (const auto& ex : dataset.examples) order.push_back(&ex);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->sent_id < b->sent_id; });
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t n = order.size();
  const std::size_t n_train = n * 8 / 10;
  const std::size_t n_dev = n / 10;
  std::vector<WeaklyLabeledExample> train, dev, test;
  for (std::size_t i = 0; i < n; ++i) {
    auto& dst = i < n_train ? train : (i < n_train + n_dev ? dev : test);
    dst.push_back(*order[i]);
  }
  return {make_subset(dataset, std::move(train)), make_subset(dataset, std::move(dev)),
          make_subset(dataset, std::move(test))};
}

std::string serialize_dataset(const Dataset& dataset) {
  const auto c = dataset.counts();
  json header{{"format", "dmwl-dataset"},
              {"version", kDatasetVersion},
              {"strategy", std::string(to_string(dataset.strategy))},
              {"corpus", dataset.provenance.corpus},
              {"dm_lists", dataset.provenance.dm_lists},
              {"scorer", dataset.provenance.scorer ? json(*dataset.provenance.scorer) : json(nullptr)},
              {"seed", dataset.provenance.seed},
              {"counts", {{"positive", c.positive}, {"negative", c.negative}}}};
  std::string out = header.dump();
  out += '\n';
  for (const auto& ex : dataset.examples) {
    out += example_to_json_line(ex);
    out += '\n';
  }
  return out;
}

Dataset parse_dataset(std::string_view data) {
  std::istringstream in{std::string(data)};
  std::string line;
  if (!std::getline(in, line)) throw data_error("SchemaError", "line 1: missing dataset header");

  json h;
  try {
    h = json::parse(line);
  } catch (const json::parse_error&) {
    throw data_error("SchemaError", "line 1: header is not valid JSON");
  }
  static const std::set<std::string> kHeaderFields = {"format", "version", "strategy", "corpus",
                                                      "dm_lists", "scorer", "seed", "counts"};
  if (!h.is_object() || h.value("format", "") != "dmwl-dataset") {
    throw data_error("SchemaError", "line 1: not a dmwl-dataset header");
  }
  for (const auto& [k, v] : h.items()) {
    if (!kHeaderFields.count(k)) throw data_error("SchemaError", "line 1: unknown header field '" + k + "'");
  }
  if (h.value("version", 0) != kDatasetVersion) {
    throw data_error("SchemaError", "line 1: unsupported dataset version");
  }

  Dataset ds;
  LabelCounts declared;
  try {
    auto strategy = parse_strategy(h.at("strategy").get<std::string>());
    if (!strategy) throw data_error("SchemaError", "line 1: unknown strategy");
    ds.strategy = *strategy;
    ds.provenance.corpus = h.at("corpus").get<std::string>();
    ds.provenance.dm_lists = h.at("dm_lists").get<std::vector<std::string>>();
    if (!h.at("scorer").is_null()) ds.provenance.scorer = h.at("scorer").get<std::string>();
    ds.provenance.seed = h.at("seed").get<std::uint64_t>();
    declared.positive = h.at("counts").at("positive").get<std::size_t>();
    declared.negative = h.at("counts").at("negative").get<std::size_t>();
  } catch (const json::exception&) {
    throw data_error("SchemaError", "line 1: header field missing or of the wrong type");
  }

  std::unordered_set<std::string> ids;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto ex = example_from_json_line(line, lineno);
    if (ex.strategy != ds.strategy) {
      throw data_error("SchemaError", "line " + std::to_string(lineno) +
                                          ": example strategy differs from the header");
    }
    if (!ids.insert(ex.sent_id).second) {
      throw data_error("SchemaError", "line " + std::to_string(lineno) + ": duplicate sent_id " +
                                          ex.sent_id);
    }
    ds.examples.push_back(std::move(ex));
  }
  if (ds.counts() != declared) {
    throw data_error("SchemaError", "header label counts do not match the examples");
  }
  return ds;
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  write_file(path, serialize_dataset(dataset));
}

Dataset read_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path)); }

DatasetSummary summarize(const Dataset& dataset) {
  DatasetSummary s;
  s.counts = dataset.counts();
  s.total = dataset.examples.size();
  std::unordered_set<std::string_view> seen;
  std::size_t dup = 0;
  for (const auto& ex : dataset.examples) {
    if (ex.dm) ++s.with_dm;
    if (!seen.insert(ex.text).second) ++dup;
  }
  s.duplicate_text_rate = s.total ? static_cast<double>(dup) / static_cast<double>(s.total) : 0.0;
  return s;
}

}  // namespace dmwl
