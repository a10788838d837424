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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmwl/corpus.hpp"
#include "dmwl/ner.hpp"
#include "dmwl/scoring.hpp"
#include "dmwl/types.hpp"
#include "dmwl/weak_labeling.hpp"

namespace dmwl {

struct Provenance {
  std::string corpus;
  std::vector<std::string> dm_lists;
  std::optional<std::string> scorer;
  std::uint64_t seed = 0;

  bool operator==(const Provenance&) const = default;
};

struct LabelCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;

  bool operator==(const LabelCounts&) const = default;
};

struct Dataset {
  std::vector<WeaklyLabeledExample> examples;
  Strategy strategy = Strategy::kGeneralDM;
  Provenance provenance;

  LabelCounts counts() const;
  bool operator==(const Dataset&) const = default;
};

struct DatasetSplit {
  Dataset train;
  Dataset dev;
  Dataset test;
};

// What each strategy may need. Pointers are non-owning and may be null when
// the chosen strategy does not use them.
struct BuildInputs {
  const DMList* general = nullptr;
  const DMList* domain = nullptr;
  ConfidenceScorer* scorer = nullptr;
  const EntityTagger* ner = nullptr;  // defaults to a gazetteer-less PatternEntityTagger
  HighConfidenceThresholds thresholds;
  ScoringOptions scoring;
  std::string corpus_name = "corpus";
  std::uint64_t seed = 0;
};

// GeneralDM / DomainDM: DM extraction only.
// SelfTrain: every indexed sentence, verbatim, labeled by a high-confidence
//   score; undecided sentences are dropped.
// *PlusSelf: DM extraction, then keep examples whose stripped text receives
//   the high-confidence assignment equal to the DM polarity.
// Throws MissingDMList / MissingScorer when a required input is absent.
Dataset build_dataset(Strategy strategy, const SentenceIndex& index, const BuildInputs& inputs);

// Seeded shuffle of the sent_id-ordered examples, then floor(0.8n) train,
// floor(0.1n) dev, remainder test. Each part is returned sorted by sent_id.
DatasetSplit split_dataset(const Dataset& dataset, std::uint64_t seed);

// Header line (format, version, strategy, provenance, counts) followed by
// one example per line.
std::string serialize_dataset(const Dataset& dataset);
Dataset parse_dataset(std::string_view data);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& path);

struct DatasetSummary {
  LabelCounts counts;
  std::size_t total = 0;
  std::size_t with_dm = 0;
  double duplicate_text_rate = 0.0;  // share of examples whose text occurs earlier
};
DatasetSummary summarize(const Dataset& dataset);

}  // namespace dmwl
