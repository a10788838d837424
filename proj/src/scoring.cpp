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

#include "dmwl/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "dmwl/corpus.hpp"
#include "dmwl/error.hpp"
#include "dmwl/text.hpp"

namespace dmwl {

void HighConfidenceThresholds::validate() const {
  if (!(neg_max >= 0.0 && neg_max < pos_min && pos_min <= 1.0)) {
    throw usage_error("InvalidConfig", "thresholds need 0 <= neg_max < pos_min <= 1");
  }
}

std::string_view to_string(SentimentAssignment a) {
  switch (a) {
    case SentimentAssignment::kPositive: return "positive";
    case SentimentAssignment::kNegative: return "negative";
    case SentimentAssignment::kUndecided: return "undecided";
  }
  return "undecided";
}

SentimentAssignment classify_high_confidence(double score, const HighConfidenceThresholds& t) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(ErrorKind::kScorer, "OutOfRangeScore",
                "score " + std::to_string(score) + " outside [0, 1]");
  }
  if (score > t.pos_min) return SentimentAssignment::kPositive;
  if (score < t.neg_max) return SentimentAssignment::kNegative;
  return SentimentAssignment::kUndecided;
}

const Lexicon& default_lexicon() {
  static const Lexicon kLexicon = [] {
    Lexicon lex;
    for (const char* w : {"good", "great", "excellent", "strong", "gains", "profit", "record",
                          "wonderful", "success", "growth", "improved", "happy", "superb",
                          "brilliant", "delighted", "impressive", "robust", "win", "thriving",
                          "praised"}) {
      lex.emplace(w, Polarity::kPositive);
    }
    for (const char* w : {"bad", "poor", "losses", "weak", "decline", "fell", "crash", "terrible",
                          "failure", "awful", "worst", "collapse", "disappointing", "slump",
                          "damaged", "angry", "fraud", "lawsuit", "deficit", "grim"}) {
      lex.emplace(w, Polarity::kNegative);
    }
    return lex;
  }();
  return kLexicon;
}

Lexicon parse_lexicon(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error&) {
    throw data_error("SchemaError", "lexicon is not valid JSON");
  }
  if (!doc.is_object()) throw data_error("SchemaError", "lexicon must be a JSON object");
  Lexicon lex;
  for (auto [key, pol] : {std::pair{"positive", Polarity::kPositive},
                          std::pair{"negative", Polarity::kNegative}}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_array()) throw data_error("SchemaError", std::string("lexicon '") + key + "' must be an array");
    for (const auto& w : doc[key]) {
      if (!w.is_string()) throw data_error("SchemaError", "lexicon entries must be strings");
      lex[to_lower(w.get<std::string>())] = pol;
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) { return parse_lexicon(read_file(path)); }

Lexicon swap_polarities(const Lexicon& lexicon) {
  Lexicon out;
  for (const auto& [w, p] : lexicon) out.emplace(w, opposite(p));
  return out;
}

double lexicon_score(std::string_view text, const Lexicon& lexicon) {
  std::size_t pos = 0;
  std::size_t neg = 0;
  for (const auto& tok : tokenize(text)) {
    auto it = lexicon.find(to_lower(tok));
    if (it == lexicon.end()) continue;
    (it->second == Polarity::kPositive ? pos : neg) += 1;
  }
  if (pos + neg == 0) return 0.5;
  const double p = static_cast<double>(pos);
  const double q = static_cast<double>(neg);
  return std::clamp(0.5 + 0.5 * (p - q) / (p + q), 0.0, 1.0);
}

std::vector<double> LexiconScorer::score_batch(std::span<const std::string> texts) {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(lexicon_score(t, lexicon_));
  return out;
}

std::vector<double> score_all(ConfidenceScorer& scorer, std::span<const std::string> texts,
                              const ScoringOptions& opts) {
  const std::size_t batch = std::max<std::size_t>(1, opts.batch_size);
  const std::size_t n_batches = (texts.size() + batch - 1) / batch;
  std::vector<double> out(texts.size());

  auto run_batch = [&](std::size_t b) {
    const std::size_t begin = b * batch;
    const std::size_t len = std::min(batch, texts.size() - begin);
    auto scores = scorer.score_batch(texts.subspan(begin, len));
    if (scores.size() != len) {
      throw ScorerError(ScorerError::Reason::kProtocol,
                        "scorer returned " + std::to_string(scores.size()) + " scores for " +
                            std::to_string(len) + " texts");
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) {
        throw ScorerError(ScorerError::Reason::kProtocol, "scorer returned a score outside [0, 1]");
      }
      out[begin + i] = scores[i];
    }
  };

  const std::size_t workers =
      scorer.thread_safe() ? std::max<std::size_t>(1, std::min(opts.jobs, n_batches)) : 1;
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_batches; ++b) run_batch(b);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t b = w; b < n_batches; b += workers) run_batch(b);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace dmwl
