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

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <tuple>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmwl/dataset.hpp"
#include "dmwl/synth.hpp"
#include "test_util.hpp"

using namespace dmwl;
using dmwl::testing::error_code_of;
using dmwl::testing::fixture;
using dmwl::testing::TempDir;

namespace {

class TableScorer final : public ConfidenceScorer {
 public:
  explicit TableScorer(std::map<std::string, double> table, double fallback = 0.5)
      : table_(std::move(table)), fallback_(fallback) {}
  std::vector<double> score_batch(std::span<const std::string> texts) override {
    std::vector<double> out;
    for (const auto& t : texts) {
      const auto it = table_.find(t);
      out.push_back(it == table_.end() ? fallback_ : it->second);
    }
    return out;
  }
  std::string id() const override { return "table"; }

 private:
  std::map<std::string, double> table_;
  double fallback_;
};

std::vector<std::string> ids_of(const std::vector<WeaklyLabeledExample>& ex) {
  std::vector<std::string> out;
  for (const auto& e : ex) out.push_back(e.sent_id);
  return out;
}

Dataset numbered_dataset(std::size_t n) {
  Dataset ds;
  ds.strategy = Strategy::kGeneralDM;
  ds.provenance = {"c", {"L_g"}, std::nullopt, 0};
  for (std::size_t i = 0; i < n; ++i) {
    ds.examples.push_back({"text " + std::to_string(i),
                           i % 3 == 0 ? Polarity::kNegative : Polarity::kPositive,
                           make_sent_id("doc", i), "luckily", std::nullopt, Strategy::kGeneralDM});
  }
  return ds;
}

}  // namespace

TEST_CASE("synergy keeps examples consistent with the scorer") {
  const auto idx = build_index(read_corpus(fixture("fixture_corpus.jsonl")));
  const auto lg = general_dm_list();

  SUBCASE("a low-scoring sibling is excluded") {
    TableScorer scorer({{"the quarter brought great profit and strong gains.", 0.97},
                        {"the new plant delivered excellent results for the town.", 0.97},
                        {"the crash caused bad losses and a weak quarter with one good day.", 0.2},
                        {"the team posted a record profit this year.", 0.97},
                        {"the talks ended with a good deal.", 0.97}});
    BuildInputs in;
    in.general = &lg;
    in.scorer = &scorer;
    const auto ds = build_dataset(Strategy::kGeneralDMPlusSelf, idx, in);
    CHECK(ids_of(ds.examples) == std::vector<std::string>{"doc-01#0000", "doc-02#0000",
                                                         "doc-03#0000", "doc-04#0000"});
    for (const auto& e : ds.examples) CHECK(e.score == 0.97);
  }

  SUBCASE("lexicon scorer keeps six of eight") {
    LexiconScorer scorer(default_lexicon());
    BuildInputs in;
    in.general = &lg;
    in.scorer = &scorer;
    const auto ds = build_dataset(Strategy::kGeneralDMPlusSelf, idx, in);
    // Hand-scored: doc-02#0001 scores 0.2 and doc-04#0001 scores 1.0 against a negative DM.
    CHECK(ids_of(ds.examples) ==
          std::vector<std::string>{"doc-01#0000", "doc-01#0001", "doc-02#0000", "doc-02#0002",
                                   "doc-03#0000", "doc-04#0000"});
    CHECK(ds.provenance.scorer == "lexicon");
  }
}

TEST_CASE("strategy inputs") {
  const auto idx = build_index(read_corpus(fixture("fixture_corpus.jsonl")));
  const auto lg = general_dm_list();
  BuildInputs in;
  CHECK(error_code_of([&] { build_dataset(Strategy::kGeneralDM, idx, in); }) == "MissingDMList");
  CHECK(error_code_of([&] { build_dataset(Strategy::kDomainDM, idx, in); }) == "MissingDMList");
  CHECK(error_code_of([&] { build_dataset(Strategy::kSelfTrain, idx, in); }) == "MissingScorer");
  in.general = &lg;
  CHECK(error_code_of([&] { build_dataset(Strategy::kGeneralDMPlusSelf, idx, in); }) ==
        "MissingScorer");

  TableScorer flat({}, 0.5);
  in.scorer = &flat;
  CHECK(build_dataset(Strategy::kSelfTrain, idx, in).examples.empty());

  LexiconScorer lex(default_lexicon());
  in.scorer = &lex;
  const auto self = build_dataset(Strategy::kSelfTrain, idx, in);
  CHECK_FALSE(self.examples.empty());
  for (const auto& e : self.examples) {
    CHECK_FALSE(e.dm.has_value());
    CHECK(e.text == idx.at(e.sent_id).text);
    CHECK(e.score.has_value());
  }
}

TEST_CASE("strategy laws on a synthetic corpus") {
  std::vector<PlantSpec> specs = {{"oddly", Polarity::kNegative, 0.8, 300, {}},
                                  {"happily", Polarity::kPositive, 0.7, 300, {}},
                                  {"meanwhile", Polarity::kPositive, 0.5, 200, {}}};
  const auto idx = build_index(generate(specs, 500, default_synth_lexicon(), 9));
  const DMList ld{"L_test", {{"oddly", Polarity::kNegative}, {"meanwhile", Polarity::kPositive}}};
  const auto lg = general_dm_list();
  LexiconScorer scorer(default_lexicon());
  BuildInputs in;
  in.general = &lg;
  in.domain = &ld;
  in.scorer = &scorer;

  for (auto [plain, synergy] : {std::pair{Strategy::kGeneralDM, Strategy::kGeneralDMPlusSelf},
                                std::pair{Strategy::kDomainDM, Strategy::kDomainDMPlusSelf}}) {
    const auto base = build_dataset(plain, idx, in);
    const auto syn = build_dataset(synergy, idx, in);
    CHECK_FALSE(syn.examples.empty());
    CHECK(syn.examples.size() < base.examples.size());
    std::map<std::string, WeaklyLabeledExample> by_id;
    for (const auto& e : base.examples) by_id.emplace(e.sent_id, e);
    for (const auto& e : syn.examples) {
      REQUIRE(by_id.count(e.sent_id) == 1);
      const auto& b = by_id.at(e.sent_id);
      CHECK(e.text == b.text);
      CHECK(e.label == b.label);
      const auto a = classify_high_confidence(*e.score);
      CHECK(a == (e.label == Polarity::kPositive ? SentimentAssignment::kPositive
                                                 : SentimentAssignment::kNegative));
    }
    for (const auto& e : base.examples) {
      CHECK(to_lower(e.text).rfind(*e.dm + ",", 0) != 0);
    }
  }
}

TEST_CASE("split arithmetic") {
  for (auto [n, train, dev, test] : {std::tuple{10u, 8u, 1u, 1u}, std::tuple{7u, 5u, 0u, 2u},
                                     std::tuple{1000u, 800u, 100u, 100u},
                                     std::tuple{1u, 0u, 0u, 1u}}) {
    const auto ds = numbered_dataset(n);
    const auto s = split_dataset(ds, 3);
    CHECK(s.train.examples.size() == train);
    CHECK(s.dev.examples.size() == dev);
    CHECK(s.test.examples.size() == test);
    std::set<std::string> all;
    for (const auto* part : {&s.train, &s.dev, &s.test}) {
      for (const auto& e : part->examples) CHECK(all.insert(e.sent_id).second);
    }
    CHECK(all.size() == n);
  }
  const auto ds = numbered_dataset(100);
  CHECK(ids_of(split_dataset(ds, 5).dev.examples) == ids_of(split_dataset(ds, 5).dev.examples));
  CHECK(ids_of(split_dataset(ds, 5).dev.examples) != ids_of(split_dataset(ds, 6).dev.examples));
  CHECK(error_code_of([] { split_dataset(Dataset{}, 0); }) == "EmptyDataset");
}

TEST_CASE("dataset files") {
  TempDir dir;
  SUBCASE("round trip") {
    const auto ds = numbered_dataset(8);
    write_dataset(dir / "d.jsonl", ds);
    CHECK(read_dataset(dir / "d.jsonl") == ds);
    CHECK(serialize_dataset(parse_dataset(serialize_dataset(ds))) == serialize_dataset(ds));
  }
  SUBCASE("empty dataset is a header line") {
    Dataset empty;
    empty.provenance.corpus = "none";
    const auto text = serialize_dataset(empty);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(parse_dataset(text) == empty);
  }
  SUBCASE("counts in the header match the examples") {
    const auto ds = numbered_dataset(9);
    const auto text = serialize_dataset(ds);
    const auto header = nlohmann::json::parse(text.substr(0, text.find('\n')));
    CHECK(header["counts"]["negative"] == 3);
    CHECK(header["counts"]["positive"] == 6);
    CHECK(header["format"] == "dmwl-dataset");
    CHECK(header["version"] == 1);
  }
  SUBCASE("corrupted line") {
    auto text = serialize_dataset(numbered_dataset(3));
    const auto third = text.find('\n', text.find('\n') + 1) + 1;
    text.insert(third, "{oops");
    try {
      parse_dataset(text);
      FAIL("expected SchemaError");
    } catch (const Error& e) {
      CHECK(e.code() == "SchemaError");
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("header problems") {
    const auto text = serialize_dataset(numbered_dataset(2));
    auto bump = text;
    bump.replace(bump.find("\"version\":1"), 11, "\"version\":2");
    CHECK(error_code_of([&] { parse_dataset(bump); }) == "SchemaError");
    auto extra = text;
    extra.insert(1, "\"bogus\":1,");
    CHECK(error_code_of([&] { parse_dataset(extra); }) == "SchemaError");
  }
}

TEST_CASE("summary") {
  auto ds = numbered_dataset(4);
  ds.examples[3].text = ds.examples[0].text;
  const auto s = summarize(ds);
  CHECK(s.total == 4);
  CHECK(s.with_dm == 4);
  CHECK(s.duplicate_text_rate == doctest::Approx(0.25));
}
