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
#include "dmwl/scoring.hpp"
#include "dmwl/synth.hpp"
#include "dmwl/weak_labeling.hpp"
#include "test_util.hpp"

using namespace dmwl;
using dmwl::testing::error_code_of;

TEST_CASE("planted bodies follow the requested purity") {
  const auto docs = generate({{"oddly", Polarity::kNegative, 0.95, 500, {}}}, 0,
                             default_synth_lexicon(), 1);
  REQUIRE(docs.size() == 500);
  std::size_t negative = 0;
  for (const auto& d : docs) {
    const auto body = text_after_first_comma(d.text);
    REQUIRE(body.has_value());
    if (classify_high_confidence(lexicon_score(*body, default_lexicon())) ==
        SentimentAssignment::kNegative) {
      ++negative;
    }
  }
  CHECK(negative >= 450);
  CHECK(negative == 475);
}

TEST_CASE("background only") {
  const auto docs = generate({}, 100, default_synth_lexicon(), 2);
  REQUIRE(docs.size() == 100);
  for (const auto& d : docs) {
    CHECK(d.text.find(',') == std::string::npos);
    CHECK(d.topic == "synthetic");
  }
}

TEST_CASE("generation is deterministic") {
  const std::vector<PlantSpec> specs = {{"oddly", Polarity::kNegative, 0.9, 50, {}},
                                        {"to our dismay", Polarity::kNegative, 0.9, 30, {}}};
  const auto a = serialize_corpus(generate(specs, 40, default_synth_lexicon(), 77));
  const auto b = serialize_corpus(generate(specs, 40, default_synth_lexicon(), 77));
  CHECK(a == b);
  CHECK(a != serialize_corpus(generate(specs, 40, default_synth_lexicon(), 78)));
}

TEST_CASE("planted counts are exact and every sentence passes the filter") {
  const std::vector<PlantSpec> specs = {
      {"oddly", Polarity::kNegative, 0.95, 120, {{"journal-a", 1.0}, {"journal-b", 3.0}}},
      {"to our dismay", Polarity::kNegative, 0.95, 80, {}},
      {"encouragingly", Polarity::kPositive, 0.6, 60, {}}};
  const auto docs = generate(specs, 300, default_synth_lexicon(), 5);
  CHECK(docs.size() == 560);
  const auto idx = build_index(docs);
  CHECK(idx.size() == 560);
  CHECK(idx.sentences_with_prefix("oddly").size() == 120);
  CHECK(idx.sentences_with_prefix("to our dismay").size() == 80);
  CHECK(idx.sentences_with_prefix("encouragingly").size() == 60);
  const auto& oddly = idx.source_counts().at("oddly");
  CHECK(oddly.size() == 2);
  CHECK(oddly.at("journal-b") > oddly.at("journal-a"));
  for (const auto& d : docs) {
    const auto r = filter_sentence(d.text);
    CHECK_MESSAGE(r.accepted, d.text);
  }
}

TEST_CASE("invalid specs") {
  const auto lex = default_synth_lexicon();
  CHECK(error_code_of([&] { generate({{"oddly", Polarity::kNegative, 1.5, 10, {}}}, 0, lex, 0); }) ==
        "InvalidSpec");
  CHECK(error_code_of([&] { generate({{"oddly", Polarity::kNegative, 0.5, 0, {}}}, 0, lex, 0); }) ==
        "InvalidSpec");
  CHECK(error_code_of([&] { generate({{"", Polarity::kNegative, 0.5, 3, {}}}, 0, lex, 0); }) ==
        "InvalidSpec");
  auto no_neg = lex;
  no_neg.negative.clear();
  CHECK(error_code_of([&] { generate({}, 5, no_neg, 0); }) == "InvalidSpec");
}

TEST_CASE("synth spec JSON") {
  SynthSpec spec;
  spec.background = 12;
  spec.seed = 4;
  spec.plants = {{"oddly", Polarity::kNegative, 0.95, 500, {{"journal-a", 2.0}}}};
  const auto back = parse_synth_spec(serialize_synth_spec(spec));
  CHECK(back.background == 12);
  CHECK(back.seed == 4);
  REQUIRE(back.plants.size() == 1);
  CHECK(back.plants[0].dm == "oddly");
  CHECK(back.plants[0].polarity == Polarity::kNegative);
  CHECK(back.plants[0].count == 500);
  CHECK(back.plants[0].sources.size() == 1);
  CHECK(error_code_of([] { parse_synth_spec("{\"plants\": 3}"); }) == "InvalidSpec");
}
