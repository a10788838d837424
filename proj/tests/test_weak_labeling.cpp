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

#include <map>
#include <string>
#include <vector>

#include "dmwl/corpus.hpp"
#include "dmwl/rng.hpp"
#include "dmwl/weak_labeling.hpp"
#include "test_util.hpp"

using namespace dmwl;
using dmwl::testing::error_code_of;
using dmwl::testing::fixture;

namespace {

Sentence make_sentence(const std::string& text) {
  return Sentence{"x#0000", text, tokenize(text), "x", "s", std::nullopt};
}

}  // namespace

TEST_CASE("text_after_first_comma") {
  CHECK(text_after_first_comma("Fortunately, the deal closed early.") ==
        "the deal closed early.");
  CHECK(text_after_first_comma("In fact,   it rained, again.") == "it rained, again.");
  CHECK(text_after_first_comma("No comma here.") == std::nullopt);
  CHECK(text_after_first_comma("Sadly,") == std::nullopt);
  CHECK(text_after_first_comma("Sadly, , odd") == std::nullopt);
}

TEST_CASE("match_dm_prefix") {
  const PatternEntityTagger ner;
  const DMEntry sadly{"sadly", Polarity::kNegative};
  CHECK(match_dm_prefix(make_sentence("Sadly, rain came down hard."), sadly, ner) ==
        "rain came down hard.");
  CHECK(match_dm_prefix(make_sentence("Sadly it rained, hard."), sadly, ner) == std::nullopt);

  const DMEntry starting{"starting DATE", Polarity::kPositive};
  CHECK(match_dm_prefix(make_sentence("Starting March 3, prices rose."), starting, ner) ==
        "prices rose.");
  CHECK(match_dm_prefix(make_sentence("Starting today, prices rose."), starting, ner) ==
        "prices rose.");
  CHECK(match_dm_prefix(make_sentence("Starting soon, prices rose."), starting, ner) ==
        std::nullopt);
}

TEST_CASE("extract on the fixture corpus") {
  const auto idx = build_index(read_corpus(fixture("fixture_corpus.jsonl")));
  const PatternEntityTagger ner;
  const auto ex = extract_weak_labels(idx, general_dm_list(), ner);
  REQUIRE(ex.size() == 8);
  std::map<Polarity, int> counts;
  for (const auto& e : ex) {
    ++counts[e.label];
    CHECK(e.strategy == Strategy::kGeneralDM);
    CHECK_FALSE(e.score.has_value());
    REQUIRE(e.dm.has_value());
  }
  CHECK(counts[Polarity::kPositive] == 5);
  CHECK(counts[Polarity::kNegative] == 3);
  CHECK(ex.front().sent_id == "doc-01#0000");
  CHECK(ex.front().text == "the quarter brought great profit and strong gains.");
  for (std::size_t i = 1; i < ex.size(); ++i) CHECK(ex[i - 1].sent_id < ex[i].sent_id);
}

TEST_CASE("extract edge cases") {
  const PatternEntityTagger ner;
  SUBCASE("a DM word later in the sentence does not count twice") {
    const auto idx = build_index({{"d", "Unfortunately, sadly is a word.", "s", {}, {}}});
    const auto ex = extract_weak_labels(idx, general_dm_list(), ner);
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].dm == "unfortunately");
    CHECK(ex[0].text == "sadly is a word.");
  }
  SUBCASE("empty DM list") {
    const auto idx = build_index(read_corpus(fixture("fixture_corpus.jsonl")));
    CHECK(extract_weak_labels(idx, DMList{"empty", {}}, ner).empty());
  }
  SUBCASE("placeholder DMs") {
    const auto idx =
        build_index({{"d", "On March 3, the stock rose a lot. On Friday, it fell again.", "s", {}, {}}});
    const DMList list{"L_x", {{"on DATE", Polarity::kPositive}}};
    const auto ex = extract_weak_labels(idx, list, ner);
    REQUIRE(ex.size() == 2);
    CHECK(ex[0].text == "the stock rose a lot.");
    CHECK(ex[1].text == "it fell again.");
  }
  SUBCASE("collision prefers the longer surface") {
    const auto idx = build_index({{"d", "In May 2020, the stock rose a lot.", "s", {}, {}}});
    const DMList list{"L_x",
                      {{"in DATE", Polarity::kPositive}, {"in may 2020", Polarity::kNegative}}};
    const auto ex = extract_weak_labels(idx, list, ner);
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].dm == "in may 2020");
    CHECK(ex[0].label == Polarity::kNegative);
  }
}

TEST_CASE("extraction invariants on random corpora") {
  Rng rng(17);
  const auto dms = general_dm_list();
  std::map<std::string, Polarity> lookup;
  for (const auto& e : dms.entries) lookup[e.surface] = e.polarity;
  const std::vector<std::string> openers = {"Sadly", "Luckily", "Fortunately", "Indeed",
                                            "Happily", "In fact", "Curiously"};
  const PatternEntityTagger ner;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Document> docs;
    for (int d = 0; d < 25; ++d) {
      std::string text;
      for (int s = 0; s < 3; ++s) {
        text += openers[rng.below(openers.size())] + (rng.below(4) ? ", " : " ") +
                "the market rose and the bank fell. ";
      }
      docs.push_back({"d" + std::to_string(d), text, "s", {}, {}});
    }
    const auto idx = build_index(docs);
    for (const auto& ex : extract_weak_labels(idx, dms, ner)) {
      REQUIRE(ex.dm.has_value());
      CHECK(ex.label == lookup.at(*ex.dm));
      const auto& s = idx.at(ex.sent_id);
      CHECK(text_after_first_comma(s.text) == ex.text);
      CHECK(to_lower(s.text).rfind(*ex.dm, 0) == 0);
    }
  }
}

TEST_CASE("DM list files") {
  const auto lg = load_dm_list(fixture("lg.json"));
  CHECK(lg == general_dm_list());
  CHECK(parse_dm_list(serialize_dm_list(lg)) == lg);
  CHECK(lg.validate().empty());

  CHECK(error_code_of([] { parse_dm_list("{bad"); }) == "SchemaError");
  CHECK(error_code_of([] {
          parse_dm_list(R"({"name":"x","entries":[{"surface":"a, b","polarity":"positive"}]})");
        }) == "SchemaError");
  CHECK(error_code_of([] {
          parse_dm_list(
              R"({"name":"x","entries":[{"surface":"one two three four","polarity":"positive"}]})");
        }) == "SchemaError");
  CHECK(error_code_of([] {
          parse_dm_list(R"({"name":"x","entries":[{"surface":"sadly","polarity":"maybe"}]})");
        }) == "SchemaError");
  CHECK(error_code_of([] {
          parse_dm_list(R"({"name":"x","entries":[{"surface":"sadly","polarity":"negative"},)"
                        R"({"surface":"sadly","polarity":"positive"}]})");
        }) == "SchemaError");
}

TEST_CASE("example JSON lines") {
  WeaklyLabeledExample ex{"the deal closed.", Polarity::kNegative, "d#0001", "sadly", 0.25,
                          Strategy::kDomainDMPlusSelf};
  CHECK(example_from_json_line(example_to_json_line(ex), 1) == ex);
  ex.dm.reset();
  ex.score.reset();
  CHECK(example_from_json_line(example_to_json_line(ex), 1) == ex);
  try {
    example_from_json_line(R"({"text":"x"})", 7);
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == "SchemaError");
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
  }
}
