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
#include <map>
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

struct CandidateDM {
  std::string pattern;  // normalized, may hold DATE/ORG/ORDINAL
  std::size_t frequency = 0;
  double source_entropy = 0.0;
  std::vector<std::string> sent_ids;  // sorted
  std::map<std::string, std::size_t> source_counts;
};

enum class Rejection {
  kLowEntropy,
  kNoCompanyMention,
  kTooFewAssigned,
  kTooRepetitive,
  kMajorityTooLow,
  kNotSignificant,
};
std::string_view to_string(Rejection r);

struct Decision {
  std::optional<Polarity> selected;  // set when the candidate was selected
  std::optional<Rejection> rejected;

  bool is_selected() const { return selected.has_value(); }
};

struct EnrichmentResult {
  CandidateDM candidate;
  std::size_t sampled = 0;
  std::size_t assigned_pos = 0;
  std::size_t assigned_neg = 0;
  std::size_t undecided = 0;
  std::optional<Polarity> majority_class;
  double majority_fraction = 0.0;
  double p_raw = 1.0;
  double p_corrected = 1.0;
  Decision decision;

  std::size_t assigned() const { return assigned_pos + assigned_neg; }
};

struct DiscoveryConfig {
  std::size_t top_k = 1000;
  std::size_t sample_size = 1000;
  std::size_t min_assigned = 30;
  double majority_min = 0.85;
  double alpha = 0.01;
  double entropy_drop_fraction = 0.30;
  double repetitiveness_min_unique = 0.5;
  HighConfidenceThresholds thresholds;
  std::uint64_t rng_seed = 0;
  bool company_filter = false;
  std::string domain = "domain";
  ScoringOptions scoring;

  void validate() const;
};

struct SampledSentence {
  std::string sent_id;
  std::string text;  // remainder after the DM and its comma
};

// Pooled assigned counts over every analyzed candidate.
struct Population {
  std::uint64_t total = 0;
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
};

// Comma-adjacent openings of 1-3 tokens, normalized through the tagger,
// ranked by frequency (ties lexicographic) and cut to cfg.top_k.
std::vector<CandidateDM> extract_candidates(const SentenceIndex& index, const EntityTagger& ner,
                                            const DiscoveryConfig& cfg);

// Drops floor(fraction * n) lowest-entropy candidates; among equal entropies
// the lexicographically larger pattern goes first. Survivors keep their order.
std::vector<CandidateDM> entropy_filter(const std::vector<CandidateDM>& candidates, double fraction);

// Sentences mentioning at least one gazetteer name. Throws GazetteerMissing
// when no gazetteer is given.
std::vector<std::string> company_mention_filter(const std::vector<std::string>& sent_ids,
                                                const SentenceIndex& index,
                                                const Gazetteer* gazetteer);

// Uniform sample without replacement of min(sample_size, frequency)
// sentences. The generator is seeded from (rng_seed, pattern), so a
// candidate's sample does not depend on the other candidates or corpus order.
std::vector<SampledSentence> sample_for_dm(const CandidateDM& candidate, const SentenceIndex& index,
                                           const DiscoveryConfig& cfg);

// distinct / total >= repetitiveness_min_unique.
bool repetitiveness_ok(const std::vector<std::string>& texts, const DiscoveryConfig& cfg);

// Decides one candidate from its scored sample. Gates run in order:
// assigned count, repetitiveness, majority share, then the Bonferroni-
// corrected upper hypergeometric tail of the majority class.
EnrichmentResult evaluate_candidate(const CandidateDM& candidate,
                                    const std::vector<SampledSentence>& sample,
                                    const std::vector<double>& scores, const Population& population,
                                    std::uint64_t m_tests, const DiscoveryConfig& cfg);

// Scores the sample with `scorer`, then evaluate_candidate().
EnrichmentResult analyze_candidate(const CandidateDM& candidate,
                                   const std::vector<SampledSentence>& sample,
                                   ConfidenceScorer& scorer, const Population& population,
                                   std::uint64_t m_tests, const DiscoveryConfig& cfg);

struct DiscoveryOutcome {
  DMList dms;                            // named "L_<domain>"
  std::vector<EnrichmentResult> report;  // every extracted candidate, by pattern
};

DiscoveryOutcome discover_domain_dms(const SentenceIndex& index, ConfidenceScorer& scorer,
                                     const EntityTagger& ner, const DiscoveryConfig& cfg,
                                     const Gazetteer* gazetteer = nullptr);

// Newline-delimited JSON, one result per line.
std::string serialize_report(const std::vector<EnrichmentResult>& report);

}  // namespace dmwl
