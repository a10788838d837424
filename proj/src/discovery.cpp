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

#include "dmwl/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "dmwl/error.hpp"
#include "dmwl/rng.hpp"
#include "dmwl/stats.hpp"

namespace dmwl {
namespace {

using nlohmann::json;

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

double entropy_of(const std::map<std::string, std::size_t>& counts) {
  std::vector<std::uint64_t> c;
  for (const auto& [src, n] : counts) c.push_back(n);
  if (c.empty()) return 0.0;
  return stats::shannon_entropy(stats::CategoricalDist::from_counts(c));
}

EnrichmentResult rejected_without_analysis(const CandidateDM& c, Rejection why) {
  EnrichmentResult r;
  r.candidate = c;
  r.decision.rejected = why;
  return r;
}

}  // namespace

std::string_view to_string(Rejection r) {
  switch (r) {
    case Rejection::kLowEntropy: return "LowEntropy";
    case Rejection::kNoCompanyMention: return "NoCompanyMention";
    case Rejection::kTooFewAssigned: return "TooFewAssigned";
    case Rejection::kTooRepetitive: return "TooRepetitive";
    case Rejection::kMajorityTooLow: return "MajorityTooLow";
    case Rejection::kNotSignificant: return "NotSignificant";
  }
  return "NotSignificant";
}

void DiscoveryConfig::validate() const {
  if (!in_unit(majority_min) || !in_unit(alpha) || !in_unit(entropy_drop_fraction) ||
      !in_unit(repetitiveness_min_unique)) {
    throw usage_error("InvalidConfig", "discovery ratios must lie in [0, 1]");
  }
  if (min_assigned < 1 || sample_size < min_assigned) {
    throw usage_error("InvalidConfig", "discovery needs sample_size >= min_assigned >= 1");
  }
  thresholds.validate();
}

std::vector<CandidateDM> extract_candidates(const SentenceIndex& index, const EntityTagger& ner,
                                            const DiscoveryConfig& cfg) {
  std::map<std::string, CandidateDM> by_pattern;
  for (const auto& s : index.sentences()) {
    const auto comma = opening_comma(s.tokens);
    if (!comma || !text_after_first_comma(s.text)) continue;
    const std::vector<std::string> opening(s.tokens.begin(),
                                           s.tokens.begin() + static_cast<std::ptrdiff_t>(*comma));
    auto pattern = normalize_pattern(opening, ner);
    auto& c = by_pattern[pattern];
    c.pattern = std::move(pattern);
    c.sent_ids.push_back(s.sent_id);
    ++c.source_counts[s.source];
  }
  std::vector<CandidateDM> out;
  out.reserve(by_pattern.size());
  for (auto& [p, c] : by_pattern) {
    std::sort(c.sent_ids.begin(), c.sent_ids.end());
    c.frequency = c.sent_ids.size();
    c.source_entropy = entropy_of(c.source_counts);
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const CandidateDM& a, const CandidateDM& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.pattern < b.pattern;
  });
  if (out.size() > cfg.top_k) out.resize(cfg.top_k);
  return out;
}

std::vector<CandidateDM> entropy_filter(const std::vector<CandidateDM>& candidates, double fraction) {
  if (!in_unit(fraction)) throw usage_error("InvalidConfig", "entropy fraction must lie in [0, 1]");
  const std::size_t n = candidates.size();
  const auto drop = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = candidates[a];
    const auto& cb = candidates[b];
    if (ca.source_entropy != cb.source_entropy) return ca.source_entropy < cb.source_entropy;
    return ca.pattern > cb.pattern;
  });
  std::vector<bool> dropped(n, false);
  for (std::size_t i = 0; i < std::min(drop, n); ++i) dropped[order[i]] = true;
  std::vector<CandidateDM> out;
  out.reserve(n - std::min(drop, n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!dropped[i]) out.push_back(candidates[i]);
  }
  return out;
}

std::vector<std::string> company_mention_filter(const std::vector<std::string>& sent_ids,
                                                const SentenceIndex& index,
                                                const Gazetteer* gazetteer) {
  if (gazetteer == nullptr) {
    throw usage_error("GazetteerMissing", "company filter enabled but no gazetteer was given");
  }
  if (gazetteer->empty()) {
    std::cerr << "warning: company filter uses an empty gazetteer; no sentence can match\n";
    return {};
  }
  std::vector<std::string> out;
  for (const auto& id : sent_ids) {
    if (gazetteer->mentions_any(index.at(id).tokens)) out.push_back(id);
  }
  return out;
}

std::vector<SampledSentence> sample_for_dm(const CandidateDM& candidate, const SentenceIndex& index,
                                           const DiscoveryConfig& cfg) {
  std::vector<std::string> ids = candidate.sent_ids;
  std::sort(ids.begin(), ids.end());
  const std::size_t k = std::min(cfg.sample_size, ids.size());
  Rng rng(derive_seed(cfg.rng_seed, candidate.pattern));
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(ids[i], ids[i + rng.below(ids.size() - i)]);
  }
  std::vector<SampledSentence> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& s = index.at(ids[i]);
    out.push_back({ids[i], text_after_first_comma(s.text).value_or(s.text)});
  }
  return out;
}

bool repetitiveness_ok(const std::vector<std::string>& texts, const DiscoveryConfig& cfg) {
  if (texts.empty()) return false;
  const std::unordered_set<std::string_view> distinct(texts.begin(), texts.end());
  return static_cast<double>(distinct.size()) / static_cast<double>(texts.size()) >=
         cfg.repetitiveness_min_unique;
}

EnrichmentResult evaluate_candidate(const CandidateDM& candidate,
                                    const std::vector<SampledSentence>& sample,
                                    const std::vector<double>& scores, const Population& population,
                                    std::uint64_t m_tests, const DiscoveryConfig& cfg) {
  if (scores.size() != sample.size()) {
    throw ScorerError(ScorerError::Reason::kProtocol, "score count does not match sample size");
  }
  EnrichmentResult r;
  r.candidate = candidate;
  r.sampled = sample.size();
  for (double s : scores) {
    switch (classify_high_confidence(s, cfg.thresholds)) {
      case SentimentAssignment::kPositive: ++r.assigned_pos; break;
      case SentimentAssignment::kNegative: ++r.assigned_neg; break;
      case SentimentAssignment::kUndecided: ++r.undecided; break;
    }
  }
  const std::size_t assigned = r.assigned();
  if (r.assigned_pos != r.assigned_neg) {
    r.majority_class = r.assigned_pos > r.assigned_neg ? Polarity::kPositive : Polarity::kNegative;
  }
  if (assigned > 0) {
    r.majority_fraction = static_cast<double>(std::max(r.assigned_pos, r.assigned_neg)) /
                          static_cast<double>(assigned);
  }
  if (r.majority_class) {
    const bool pos = *r.majority_class == Polarity::kPositive;
    r.p_raw = stats::hypergeom_sf(pos ? r.assigned_pos : r.assigned_neg, population.total,
                                  pos ? population.positive : population.negative, assigned);
  }
  r.p_corrected = stats::bonferroni(r.p_raw, std::max<std::uint64_t>(1, m_tests));

  std::vector<std::string> texts;
  texts.reserve(sample.size());
  for (const auto& s : sample) texts.push_back(s.text);

  if (assigned < cfg.min_assigned) {
    r.decision.rejected = Rejection::kTooFewAssigned;
  } else if (!repetitiveness_ok(texts, cfg)) {
    r.decision.rejected = Rejection::kTooRepetitive;
  } else if (!r.majority_class || r.majority_fraction < cfg.majority_min) {
    r.decision.rejected = Rejection::kMajorityTooLow;
  } else if (!(r.p_corrected < cfg.alpha)) {
    r.decision.rejected = Rejection::kNotSignificant;
  } else {
    r.decision.selected = r.majority_class;
  }
  return r;
}

EnrichmentResult analyze_candidate(const CandidateDM& candidate,
                                   const std::vector<SampledSentence>& sample,
                                   ConfidenceScorer& scorer, const Population& population,
                                   std::uint64_t m_tests, const DiscoveryConfig& cfg) {
  std::vector<std::string> texts;
  texts.reserve(sample.size());
  for (const auto& s : sample) texts.push_back(s.text);
  const auto scores = score_all(scorer, texts, cfg.scoring);
  return evaluate_candidate(candidate, sample, scores, population, m_tests, cfg);
}

DiscoveryOutcome discover_domain_dms(const SentenceIndex& index, ConfidenceScorer& scorer,
                                     const EntityTagger& ner, const DiscoveryConfig& cfg,
                                     const Gazetteer* gazetteer) {
  cfg.validate();
  DiscoveryOutcome outcome;
  outcome.dms.name = "L_" + cfg.domain;

  const auto candidates = extract_candidates(index, ner, cfg);
  const auto kept = entropy_filter(candidates, cfg.entropy_drop_fraction);
  std::set<std::string> kept_patterns;
  for (const auto& c : kept) kept_patterns.insert(c.pattern);
  for (const auto& c : candidates) {
    if (!kept_patterns.count(c.pattern)) {
      outcome.report.push_back(rejected_without_analysis(c, Rejection::kLowEntropy));
    }
  }

  std::vector<CandidateDM> analyzed;
  for (const auto& c : kept) {
    if (!cfg.company_filter) {
      analyzed.push_back(c);
      continue;
    }
    auto ids = company_mention_filter(c.sent_ids, index, gazetteer);
    if (ids.empty()) {
      outcome.report.push_back(rejected_without_analysis(c, Rejection::kNoCompanyMention));
      continue;
    }
    CandidateDM filtered = c;
    filtered.sent_ids = std::move(ids);
    filtered.frequency = filtered.sent_ids.size();
    filtered.source_counts.clear();
    for (const auto& id : filtered.sent_ids) ++filtered.source_counts[index.at(id).source];
    filtered.source_entropy = entropy_of(filtered.source_counts);
    analyzed.push_back(std::move(filtered));
  }

  // Score every sample in one pass so batching and parallelism span candidates.
  std::vector<std::vector<SampledSentence>> samples;
  std::vector<std::string> all_texts;
  for (const auto& c : analyzed) {
    samples.push_back(sample_for_dm(c, index, cfg));
    for (const auto& s : samples.back()) all_texts.push_back(s.text);
  }
  const auto all_scores = score_all(scorer, all_texts, cfg.scoring);

  std::vector<std::vector<double>> scores(analyzed.size());
  Population pop;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < analyzed.size(); ++i) {
    scores[i].assign(all_scores.begin() + static_cast<std::ptrdiff_t>(offset),
                     all_scores.begin() + static_cast<std::ptrdiff_t>(offset + samples[i].size()));
    offset += samples[i].size();
    for (double s : scores[i]) {
      switch (classify_high_confidence(s, cfg.thresholds)) {
        case SentimentAssignment::kPositive: ++pop.positive; ++pop.total; break;
        case SentimentAssignment::kNegative: ++pop.negative; ++pop.total; break;
        case SentimentAssignment::kUndecided: break;
      }
    }
  }

  const std::uint64_t m_tests = 2 * static_cast<std::uint64_t>(analyzed.size());
  for (std::size_t i = 0; i < analyzed.size(); ++i) {
    outcome.report.push_back(evaluate_candidate(analyzed[i], samples[i], scores[i], pop, m_tests, cfg));
  }

  std::sort(outcome.report.begin(), outcome.report.end(),
            [](const EnrichmentResult& a, const EnrichmentResult& b) {
              return a.candidate.pattern < b.candidate.pattern;
            });
  for (const auto& r : outcome.report) {
    if (r.decision.is_selected()) {
      outcome.dms.entries.push_back({r.candidate.pattern, *r.decision.selected});
    }
  }
  return outcome;
}

std::string serialize_report(const std::vector<EnrichmentResult>& report) {
  std::string out;
  for (const auto& r : report) {
    json js;
    js["pattern"] = r.candidate.pattern;
    js["frequency"] = r.candidate.frequency;
    js["source_entropy"] = r.candidate.source_entropy;
    js["sources"] = r.candidate.source_counts;
    js["sampled"] = r.sampled;
    js["assigned_pos"] = r.assigned_pos;
    js["assigned_neg"] = r.assigned_neg;
    js["undecided"] = r.undecided;
    js["majority_class"] =
        r.majority_class ? json(std::string(to_string(*r.majority_class))) : json(nullptr);
    js["majority_fraction"] = r.majority_fraction;
    js["p_raw"] = r.p_raw;
    js["p_corrected"] = r.p_corrected;
    if (r.decision.is_selected()) {
      js["decision"] = "selected";
      js["polarity"] = std::string(to_string(*r.decision.selected));
      js["reason"] = nullptr;
    } else {
      js["decision"] = "rejected";
      js["polarity"] = nullptr;
      js["reason"] = std::string(to_string(*r.decision.rejected));
    }
    out += js.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dmwl
