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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dmwl/corpus.hpp"
#include "dmwl/types.hpp"

namespace dmwl {

// One discourse marker to plant: `count` sentences "<Dm>, <body>." of which
// round(purity * count) carry a body from the `polarity` pool and the rest
// a body from the opposite pool.
struct PlantSpec {
  std::string dm;
  Polarity polarity = Polarity::kPositive;
  double purity = 1.0;
  std::size_t count = 1;
  std::vector<std::pair<std::string, double>> sources;  // journal -> weight; empty = uniform
};

struct SynthLexicon {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
  std::vector<std::string> neutral;    // content words outside every lexicon
  std::vector<std::string> stopwords;  // drawn from the language heuristic's list
};

// Sentiment pools come from default_lexicon(), so the built-in lexicon
// scorer is an exact oracle for generated bodies.
SynthLexicon default_synth_lexicon();

const std::vector<std::string>& default_journals();

struct SynthSpec {
  std::vector<PlantSpec> plants;
  std::size_t background = 0;
  std::uint64_t seed = 0;
};

SynthSpec parse_synth_spec(std::string_view json_text);
std::string serialize_synth_spec(const SynthSpec& spec);

// One sentence per document. Planted bodies hold 1-3 words of a single
// polarity, background bodies are neutral or hold one word of each polarity,
// and every sentence passes the default sentence filter. Throws InvalidSpec.
std::vector<Document> generate(const std::vector<PlantSpec>& specs, std::size_t background_count,
                               const SynthLexicon& lexicon, std::uint64_t seed);

}  // namespace dmwl
