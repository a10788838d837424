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

#include "dmwl/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmwl/corpus.hpp"
#include "dmwl/dataset.hpp"
#include "dmwl/discovery.hpp"
#include "dmwl/error.hpp"
#include "dmwl/ner.hpp"
#include "dmwl/remote_scorer.hpp"
#include "dmwl/stats.hpp"
#include "dmwl/synth.hpp"
#include "dmwl/weak_labeling.hpp"

namespace dmwl::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Tunable settings shared by all subcommands, with their defaults. Each one
// can come from a flag (--min-tokens), the environment (DMWL_MIN_TOKENS), or
// the config file (min_tokens = 3), in that order of precedence.
const std::vector<std::pair<std::string, std::string>>& setting_defaults() {
  static const std::vector<std::pair<std::string, std::string>> kDefaults = {
      {"seed", "0"},
      {"jobs", "1"},
      {"scorer", ""},
      {"batch_size", "64"},
      {"timeout_ms", "30000"},
      {"min_tokens", "3"},
      {"max_tokens", "32"},
      {"lang_threshold", "0.75"},
      {"require_balanced", "true"},
      {"top_k", "1000"},
      {"sample_size", "1000"},
      {"min_assigned", "30"},
      {"majority_min", "0.85"},
      {"alpha", "0.01"},
      {"entropy_drop_fraction", "0.30"},
      {"repetitiveness_min_unique", "0.5"},
      {"pos_min", "0.9"},
      {"neg_max", "0.1"},
      {"gazetteer", ""},
      {"company_filter", "false"},
      {"domain", "domain"},
  };
  return kDefaults;
}

std::string flag_name(const std::string& key) {
  std::string f = "--" + key;
  for (auto& c : f) {
    if (c == '_') c = '-';
  }
  return f;
}

std::string env_name(const std::string& key) {
  std::string e = "DMWL_";
  for (char c : key) e += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return e;
}

std::map<std::string, std::string> parse_config_file(const fs::path& path) {
  std::map<std::string, std::string> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = normalize_whitespace(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw usage_error("InvalidConfig", path.string() + ":" + std::to_string(lineno) +
                                             ": expected key = value");
    }
    out[normalize_whitespace(t.substr(0, eq))] = normalize_whitespace(t.substr(eq + 1));
  }
  return out;
}

struct Settings {
  std::map<std::string, std::string> values;
  std::map<std::string, std::string> origin;  // "default" | "config" | "env" | "flag"

  const std::string& get(const std::string& key) const { return values.at(key); }

  bool explicitly_set(const std::string& key) const { return origin.at(key) != "default"; }

  std::uint64_t get_u64(const std::string& key) const {
    const auto& v = get(key);
    try {
      std::size_t used = 0;
      const auto x = std::stoull(v, &used);
      if (used != v.size() || v.empty() || v[0] == '-') throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw usage_error("InvalidConfig", key + " must be a nonnegative integer, got '" + v + "'");
    }
  }

  double get_double(const std::string& key) const {
    const auto& v = get(key);
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw usage_error("InvalidConfig", key + " must be a number, got '" + v + "'");
    }
  }

  bool get_bool(const std::string& key) const {
    const auto v = to_lower(get(key));
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw usage_error("InvalidConfig", key + " must be true or false, got '" + get(key) + "'");
  }
};

Settings resolve_settings(const std::optional<std::string>& config_path,
                          const std::map<std::string, std::string>& flags) {
  Settings s;
  for (const auto& [k, v] : setting_defaults()) {
    s.values[k] = v;
    s.origin[k] = "default";
  }
  if (config_path) {
    for (const auto& [k, v] : parse_config_file(*config_path)) {
      if (!s.values.count(k)) throw usage_error("InvalidConfig", "unknown config key '" + k + "'");
      s.values[k] = v;
      s.origin[k] = "config";
    }
  }
  for (const auto& [k, d] : setting_defaults()) {
    if (const char* e = std::getenv(env_name(k).c_str())) {
      s.values[k] = e;
      s.origin[k] = "env";
    }
  }
  for (const auto& [k, v] : flags) {
    s.values[k] = v;
    s.origin[k] = "flag";
  }
  return s;
}

struct PipelineConfig {
  Settings settings;
  FilterConfig filter;
  DiscoveryConfig discovery;
  HighConfidenceThresholds thresholds;
  RemoteScorerOptions remote;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::map<std::string, std::string> paths;

  json to_json(const std::string& command) const {
    json j;
    j["command"] = command;
    j["paths"] = paths;
    json settings = json::object();
    for (const auto& [k, v] : this->settings.values) {
      settings[k] = {{"value", v}, {"origin", this->settings.origin.at(k)}};
    }
    j["settings"] = settings;
    return j;
  }
};

PipelineConfig make_config(Settings settings) {
  PipelineConfig c;
  c.settings = std::move(settings);
  const auto& s = c.settings;
  c.seed = s.get_u64("seed");
  c.jobs = std::max<std::size_t>(1, s.get_u64("jobs"));

  c.filter.min_tokens = s.get_u64("min_tokens");
  c.filter.max_tokens = s.get_u64("max_tokens");
  c.filter.lang_threshold = s.get_double("lang_threshold");
  c.filter.require_balanced = s.get_bool("require_balanced");
  c.filter.validate();

  c.thresholds.pos_min = s.get_double("pos_min");
  c.thresholds.neg_max = s.get_double("neg_max");
  c.thresholds.validate();

  c.remote.batch_size = std::max<std::size_t>(1, s.get_u64("batch_size"));
  c.remote.timeout = std::chrono::milliseconds(s.get_u64("timeout_ms"));

  auto& d = c.discovery;
  d.top_k = s.get_u64("top_k");
  d.sample_size = s.get_u64("sample_size");
  d.min_assigned = s.get_u64("min_assigned");
  d.majority_min = s.get_double("majority_min");
  d.alpha = s.get_double("alpha");
  d.entropy_drop_fraction = s.get_double("entropy_drop_fraction");
  d.repetitiveness_min_unique = s.get_double("repetitiveness_min_unique");
  d.thresholds = c.thresholds;
  d.rng_seed = c.seed;
  d.company_filter = s.get_bool("company_filter");
  d.domain = s.get("domain");
  d.scoring = ScoringOptions{c.remote.batch_size, c.jobs};
  d.validate();
  return c;
}

std::unique_ptr<ConfidenceScorer> require_scorer(const PipelineConfig& c) {
  const auto& spec = c.settings.get("scorer");
  if (spec.empty()) {
    throw usage_error("MissingScorer", "this command needs a scorer: pass --scorer (or set DMWL_SCORER)");
  }
  return make_scorer(spec, c.remote);
}

PatternEntityTagger make_tagger(const PipelineConfig& c, std::optional<Gazetteer>& gaz) {
  const auto& path = c.settings.get("gazetteer");
  if (!path.empty()) gaz = Gazetteer::load(path);
  return gaz ? PatternEntityTagger(*gaz) : PatternEntityTagger();
}

void log_run(std::ostream& err, const std::string& command, const PipelineConfig& c) {
  err << "dmwl " << command << ": seed=" << c.seed << " jobs=" << c.jobs
      << " config=" << c.to_json(command)["settings"].dump() << "\n";
}

void require_paths(const PipelineConfig& c, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    auto it = c.paths.find(n);
    if (it == c.paths.end() || it->second.empty()) {
      throw usage_error("MissingFlag", std::string("missing required flag --") + n);
    }
  }
}

const std::string& path(const PipelineConfig& c, const char* name) { return c.paths.at(name); }

std::pair<std::size_t, std::size_t> discordant_counts(const fs::path& a, const fs::path& b) {
  auto load = [](const fs::path& p) {
    std::unordered_map<std::string, bool> correct;
    std::istringstream in(read_file(p));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (normalize_whitespace(line).empty()) continue;
      try {
        const auto js = json::parse(line);
        const auto pred = js.at("predicted").get<std::string>();
        const auto gold = js.at("gold").get<std::string>();
        if (!correct.emplace(js.at("sent_id").get<std::string>(), pred == gold).second) {
          throw data_error("SchemaError", p.string() + ":" + std::to_string(lineno) + ": duplicate sent_id");
        }
      } catch (const json::exception&) {
        throw data_error("SchemaError", p.string() + ":" + std::to_string(lineno) +
                                            ": expected {\"sent_id\", \"predicted\", \"gold\"}");
      }
    }
    return correct;
  };
  const auto ca = load(a);
  const auto cb = load(b);
  if (ca.size() != cb.size()) throw data_error("SchemaError", "prediction files cover different sentences");
  std::size_t only_a = 0;
  std::size_t only_b = 0;
  for (const auto& [id, ok_a] : ca) {
    auto it = cb.find(id);
    if (it == cb.end()) throw data_error("SchemaError", "sentence " + id + " missing from " + b.string());
    if (ok_a && !it->second) ++only_a;
    if (!ok_a && it->second) ++only_b;
  }
  return {only_a, only_b};
}

int cmd_ingest(const PipelineConfig& c, std::ostream&, std::ostream& err) {
  require_paths(c, {"corpus", "out"});
  const auto docs = read_corpus(path(c, "corpus"));
  const auto index = build_index(docs, c.filter, c.jobs);
  index.save(path(c, "out"));
  err << "ingest: " << docs.size() << " documents, " << index.size() << " sentences kept, "
      << index.prefix_map().size() << " opening prefixes\n";
  return kExitOk;
}

int cmd_extract(const PipelineConfig& c, std::ostream&, std::ostream& err) {
  require_paths(c, {"index", "dms", "out"});
  const auto tag = parse_strategy(path(c, "tag"));
  if (!tag || (*tag != Strategy::kGeneralDM && *tag != Strategy::kDomainDM)) {
    throw usage_error("InvalidFlag", "--tag must be general-dm or domain-dm");
  }
  const auto index = SentenceIndex::load(path(c, "index"));
  const auto dms = load_dm_list(path(c, "dms"));
  for (const auto& w : dms.validate()) err << "warning: " << w << "\n";
  std::optional<Gazetteer> gaz;
  const auto tagger = make_tagger(c, gaz);
  const auto examples = extract_weak_labels(index, dms, tagger, *tag);
  write_examples(path(c, "out"), examples);
  std::size_t pos = 0;
  for (const auto& ex : examples) pos += ex.label == Polarity::kPositive;
  err << "extract: " << examples.size() << " examples (" << pos << " positive, "
      << examples.size() - pos << " negative)\n";
  return kExitOk;
}

int cmd_discover(const PipelineConfig& c, std::ostream&, std::ostream& err) {
  require_paths(c, {"index", "out", "report"});
  auto scorer = require_scorer(c);
  std::optional<Gazetteer> gaz;
  if (c.discovery.company_filter && c.settings.get("gazetteer").empty()) {
    throw usage_error("GazetteerMissing", "--company-filter needs --gazetteer");
  }
  const auto tagger = make_tagger(c, gaz);
  const auto index = SentenceIndex::load(path(c, "index"));
  const auto outcome = discover_domain_dms(index, *scorer, tagger, c.discovery, gaz ? &*gaz : nullptr);
  save_dm_list(path(c, "out"), outcome.dms);
  write_file(path(c, "report"), serialize_report(outcome.report));
  err << "discover: " << outcome.report.size() << " candidates, " << outcome.dms.entries.size()
      << " selected into " << outcome.dms.name << "\n";
  return kExitOk;
}

int cmd_build(const PipelineConfig& c, std::ostream&, std::ostream& err) {
  require_paths(c, {"index", "strategy", "out"});
  const auto strategy = parse_strategy(path(c, "strategy"));
  if (!strategy) {
    throw usage_error("InvalidFlag", "--strategy must be one of general-dm, domain-dm, self-train, "
                                     "general-dm-self, domain-dm-self");
  }
  const bool needs_scorer = *strategy == Strategy::kSelfTrain ||
                            *strategy == Strategy::kGeneralDMPlusSelf ||
                            *strategy == Strategy::kDomainDMPlusSelf;
  if (needs_scorer && c.settings.get("scorer").empty()) {
    throw usage_error("MissingScorer", "strategy " + path(c, "strategy") +
                                           " needs a scorer: pass --scorer (or set DMWL_SCORER)");
  }
  if ((*strategy == Strategy::kGeneralDM || *strategy == Strategy::kGeneralDMPlusSelf) &&
      path(c, "general-dms").empty()) {
    throw usage_error("MissingDMList", "strategy " + path(c, "strategy") + " needs --general-dms");
  }
  if ((*strategy == Strategy::kDomainDM || *strategy == Strategy::kDomainDMPlusSelf) &&
      path(c, "domain-dms").empty()) {
    throw usage_error("MissingDMList", "strategy " + path(c, "strategy") + " needs --domain-dms");
  }

  const auto index = SentenceIndex::load(path(c, "index"));
  std::optional<DMList> general;
  std::optional<DMList> domain;
  if (!path(c, "general-dms").empty()) general = load_dm_list(path(c, "general-dms"));
  if (!path(c, "domain-dms").empty()) domain = load_dm_list(path(c, "domain-dms"));
  std::unique_ptr<ConfidenceScorer> scorer;
  if (needs_scorer) scorer = require_scorer(c);
  std::optional<Gazetteer> gaz;
  const auto tagger = make_tagger(c, gaz);

  BuildInputs in;
  in.general = general ? &*general : nullptr;
  in.domain = domain ? &*domain : nullptr;
  in.scorer = scorer.get();
  in.ner = &tagger;
  in.thresholds = c.thresholds;
  in.scoring = ScoringOptions{c.remote.batch_size, c.jobs};
  in.corpus_name = path(c, "corpus-name").empty() ? fs::path(path(c, "index")).stem().string()
                                                  : path(c, "corpus-name");
  in.seed = c.seed;
  const auto ds = build_dataset(*strategy, index, in);
  write_dataset(path(c, "out"), ds);
  const auto counts = ds.counts();
  err << "build: " << ds.examples.size() << " examples (" << counts.positive << " positive, "
      << counts.negative << " negative)\n";
  return kExitOk;
}

int cmd_split(const PipelineConfig& c, std::ostream&, std::ostream& err) {
  require_paths(c, {"dataset", "out-dir"});
  const auto ds = read_dataset(path(c, "dataset"));
  const auto split = split_dataset(ds, c.seed);
  const fs::path dir = path(c, "out-dir");
  write_dataset(dir / "train.jsonl", split.train);
  write_dataset(dir / "dev.jsonl", split.dev);
  write_dataset(dir / "test.jsonl", split.test);
  err << "split: train=" << split.train.examples.size() << " dev=" << split.dev.examples.size()
      << " test=" << split.test.examples.size() << "\n";
  return kExitOk;
}

int cmd_synth(const PipelineConfig& c, std::ostream&, std::ostream& err) {
  require_paths(c, {"spec", "out"});
  const auto spec = parse_synth_spec(read_file(path(c, "spec")));
  const std::uint64_t seed = c.settings.explicitly_set("seed") ? c.seed : spec.seed;
  const auto docs = generate(spec.plants, spec.background, default_synth_lexicon(), seed);
  write_corpus(path(c, "out"), docs);
  err << "synth: " << docs.size() << " documents (seed " << seed << ")\n";
  return kExitOk;
}

int cmd_stats(const PipelineConfig& c, std::ostream& out, std::ostream&,
              const std::vector<std::string>& mcnemar) {
  json result = json::object();
  if (!path(c, "dataset").empty()) {
    const auto ds = read_dataset(path(c, "dataset"));
    const auto s = summarize(ds);
    result["dataset"] = {{"strategy", std::string(to_string(ds.strategy))},
                         {"total", s.total},
                         {"positive", s.counts.positive},
                         {"negative", s.counts.negative},
                         {"with_dm", s.with_dm},
                         {"duplicate_text_rate", s.duplicate_text_rate}};
  }
  if (!path(c, "report").empty()) {
    std::istringstream in(read_file(path(c, "report")));
    std::string line;
    std::size_t total = 0;
    std::map<std::string, std::size_t> reasons;
    std::vector<std::string> selected;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json js;
      try {
        js = json::parse(line);
        ++total;
        if (js.at("decision") == "selected") {
          selected.push_back(js.at("pattern").get<std::string>() + ":" +
                             js.at("polarity").get<std::string>());
        } else {
          ++reasons[js.at("reason").get<std::string>()];
        }
      } catch (const json::exception&) {
        throw data_error("SchemaError", "report line " + std::to_string(total + 1) + " is malformed");
      }
    }
    result["report"] = {{"candidates", total}, {"selected", selected}, {"rejected", reasons}};
  }
  if (!mcnemar.empty()) {
    const auto [b, cc] = discordant_counts(mcnemar[0], mcnemar[1]);
    result["mcnemar"] = {{"b", b}, {"c", cc}, {"p_value", stats::mcnemar_exact(b, cc)}};
  }
  if (result.empty()) {
    throw usage_error("MissingFlag", "stats needs --dataset, --report or --mcnemar");
  }
  out << result.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discourse-marker weak labeling toolkit", "dmwl"};
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_opts;
  for (const auto& [key, def] : setting_defaults()) {
    flag_opts[key] = app.add_option(flag_name(key), flag_values[key],
                                    "setting '" + key + "' (default " + (def.empty() ? "unset" : def) + ")");
  }
  std::string config_path;
  bool dry_run = false;
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_flag("--dry-run", dry_run, "print the resolved configuration and write nothing");

  std::map<std::string, std::string> paths;
  auto path_opt = [&](CLI::App* sub, const std::string& name, const std::string& help) {
    sub->add_option("--" + name, paths[name], help);
  };

  auto* ingest = app.add_subcommand("ingest", "corpus JSONL -> sentence index");
  path_opt(ingest, "corpus", "corpus file (newline-delimited JSON documents)");
  path_opt(ingest, "out", "index output path");

  auto* extract = app.add_subcommand("extract", "index + DM list -> weak-label file");
  path_opt(extract, "index", "sentence index");
  path_opt(extract, "dms", "DM list JSON");
  path_opt(extract, "out", "weak-label JSONL output");
  paths["tag"] = "general-dm";
  extract->add_option("--tag", paths["tag"], "strategy tag written on examples");

  auto* discover = app.add_subcommand("discover", "index + scorer -> domain DM list + report");
  path_opt(discover, "index", "sentence index");
  path_opt(discover, "out", "DM list output");
  path_opt(discover, "report", "enrichment report output (JSONL)");

  auto* build = app.add_subcommand("build", "index + lists + scorer -> dataset");
  path_opt(build, "index", "sentence index");
  path_opt(build, "strategy", "general-dm | domain-dm | self-train | general-dm-self | domain-dm-self");
  path_opt(build, "general-dms", "general DM list");
  path_opt(build, "domain-dms", "domain DM list");
  path_opt(build, "corpus-name", "corpus name recorded in provenance");
  path_opt(build, "out", "dataset output");

  auto* split = app.add_subcommand("split", "dataset -> train/dev/test files");
  path_opt(split, "dataset", "dataset file");
  path_opt(split, "out-dir", "directory for train.jsonl, dev.jsonl, test.jsonl");

  auto* synth = app.add_subcommand("synth", "spec file -> synthetic corpus");
  path_opt(synth, "spec", "synthetic corpus spec (JSON)");
  path_opt(synth, "out", "corpus output");

  auto* stats_cmd = app.add_subcommand("stats", "dataset/report summaries and McNemar tests");
  path_opt(stats_cmd, "dataset", "dataset file to summarize");
  path_opt(stats_cmd, "report", "discovery report to summarize");
  std::vector<std::string> mcnemar;
  stats_cmd->add_option("--mcnemar", mcnemar, "two prediction files: {sent_id, predicted, gold}")
      ->expected(2);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    std::map<std::string, std::string> flags;
    for (const auto& [key, opt] : flag_opts) {
      if (opt->count() > 0) flags[key] = flag_values[key];
    }
    auto cfg = make_config(resolve_settings(
        config_path.empty() ? std::nullopt : std::optional<std::string>(config_path), flags));
    cfg.paths = paths;

    if (dry_run) {
      out << cfg.to_json(command).dump(2) << "\n";
      return kExitOk;
    }
    log_run(err, command, cfg);

    if (command == "ingest") return cmd_ingest(cfg, out, err);
    if (command == "extract") return cmd_extract(cfg, out, err);
    if (command == "discover") return cmd_discover(cfg, out, err);
    if (command == "build") return cmd_build(cfg, out, err);
    if (command == "split") return cmd_split(cfg, out, err);
    if (command == "synth") return cmd_synth(cfg, out, err);
    if (command == "stats") return cmd_stats(cfg, out, err, mcnemar);
    err << "error: unknown command " << command << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::kUsage: return kExitUsage;
      case ErrorKind::kData: return kExitData;
      case ErrorKind::kScorer: return kExitScorer;
    }
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace dmwl::cli
