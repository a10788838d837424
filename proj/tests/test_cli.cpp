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

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmwl/cli.hpp"
#include "dmwl/corpus.hpp"
#include "test_util.hpp"

using namespace dmwl;
using dmwl::testing::fixture;
using dmwl::testing::TempDir;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dmwl");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("ingest and extract on the fixture") {
  TempDir dir;
  auto r = run({"ingest", "--corpus", fixture("fixture_corpus.jsonl"), "--out", dir / "idx.json"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("seed=0") != std::string::npos);
  r = run({"extract", "--index", dir / "idx.json", "--dms", fixture("lg.json"), "--out",
           dir / "wl.jsonl"});
  REQUIRE(r.code == 0);
  CHECK(line_count(read_file(dir / "wl.jsonl")) == 8);
}

TEST_CASE("usage errors") {
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"ingest", "--corpus"}).code == cli::kExitUsage);
  CHECK(run({"ingest", "--out", "x"}).code == cli::kExitUsage);

  TempDir dir;
  REQUIRE(run({"ingest", "--corpus", fixture("fixture_corpus.jsonl"), "--out", dir / "idx.json"})
              .code == 0);
  const auto r = run({"build", "--index", dir / "idx.json", "--strategy", "self-train", "--out",
                      dir / "ds.jsonl"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("pass --scorer") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "ds.jsonl"));

  CHECK(run({"build", "--index", dir / "idx.json", "--strategy", "nonsense", "--out",
             dir / "ds.jsonl"})
            .code == cli::kExitUsage);
}

TEST_CASE("data and scorer errors map to exit codes") {
  TempDir dir;
  write_file(dir / "bad.jsonl", "{\"doc_id\": 1}\n");
  CHECK(run({"ingest", "--corpus", dir / "bad.jsonl", "--out", dir / "idx.json"}).code ==
        cli::kExitData);
  REQUIRE(run({"ingest", "--corpus", fixture("fixture_corpus.jsonl"), "--out", dir / "idx.json"})
              .code == 0);
  const auto r = run({"--scorer", "exec:/nonexistent/scorer", "--timeout-ms", "200", "discover",
                      "--index", dir / "idx.json", "--out", dir / "ld.json", "--report", dir / "r.jsonl"});
  CHECK(r.code == cli::kExitScorer);
  CHECK(r.err.find("Unreachable") != std::string::npos);
}

TEST_CASE("dry run resolves settings without writing") {
  TempDir dir;
  write_file(dir / "run.conf", "# comment\nseed = 11\njobs = 2\nalpha = 0.05\n");
  ::setenv("DMWL_JOBS", "3", 1);
  ::setenv("DMWL_TOP_K", "50", 1);
  const auto r = run({"--config", dir / "run.conf", "--dry-run", "--alpha", "0.02", "ingest",
                      "--corpus", fixture("fixture_corpus.jsonl"), "--out", dir / "idx.json"});
  ::unsetenv("DMWL_JOBS");
  ::unsetenv("DMWL_TOP_K");
  REQUIRE(r.code == 0);
  CHECK_FALSE(std::filesystem::exists(dir / "idx.json"));
  const auto js = json::parse(r.out);
  CHECK(js["command"] == "ingest");
  const auto& s = js["settings"];
  CHECK(s["seed"]["value"] == "11");
  CHECK(s["seed"]["origin"] == "config");
  CHECK(s["jobs"]["value"] == "3");
  CHECK(s["jobs"]["origin"] == "env");
  CHECK(s["top_k"]["value"] == "50");
  CHECK(s["alpha"]["value"] == "0.02");
  CHECK(s["alpha"]["origin"] == "flag");
  CHECK(s["majority_min"]["origin"] == "default");
  CHECK(s["majority_min"]["value"] == "0.85");
}

TEST_CASE("bad config values are usage errors") {
  TempDir dir;
  write_file(dir / "run.conf", "alpha = lots\n");
  CHECK(run({"--config", dir / "run.conf", "--dry-run", "stats", "--dataset", "x"}).code ==
        cli::kExitUsage);
  write_file(dir / "run.conf", "no_such_key = 1\n");
  CHECK(run({"--config", dir / "run.conf", "--dry-run", "stats", "--dataset", "x"}).code ==
        cli::kExitUsage);
}

TEST_CASE("synth, discover, build, split and stats") {
  TempDir dir;
  write_file(dir / "spec.json", R"({"background": 300, "seed": 3, "plants": [
    {"dm": "oddly", "polarity": "negative", "purity": 0.95, "count": 200},
    {"dm": "meanwhile", "polarity": "positive", "purity": 0.5, "count": 150,
     "sources": {"journal-a": 1.0}}]})");
  REQUIRE(run({"synth", "--spec", dir / "spec.json", "--out", dir / "corpus.jsonl"}).code == 0);
  REQUIRE(run({"ingest", "--corpus", dir / "corpus.jsonl", "--out", dir / "idx.json"}).code == 0);
  auto r = run({"--scorer", "lexicon", "--entropy-drop-fraction", "0", "discover", "--index",
                dir / "idx.json", "--out", dir / "ld.json", "--report", dir / "report.jsonl"});
  REQUIRE(r.code == 0);
  const auto ld = json::parse(read_file(dir / "ld.json"));
  CHECK(ld["name"] == "L_domain");
  CHECK(ld["entries"].size() == 1);
  CHECK(line_count(read_file(dir / "report.jsonl")) == 2);

  r = run({"--scorer", "lexicon", "build", "--index", dir / "idx.json", "--strategy",
           "domain-dm-self", "--domain-dms", dir / "ld.json", "--corpus-name", "synthetic",
           "--out", dir / "ds.jsonl"});
  REQUIRE(r.code == 0);
  r = run({"split", "--dataset", dir / "ds.jsonl", "--out-dir", dir / "splits"});
  REQUIRE(r.code == 0);
  std::size_t total = 0;
  for (const char* part : {"train.jsonl", "dev.jsonl", "test.jsonl"}) {
    total += line_count(read_file(dir / ("splits/" + std::string(part)))) - 1;
  }
  CHECK(total == line_count(read_file(dir / "ds.jsonl")) - 1);

  r = run({"stats", "--dataset", dir / "ds.jsonl", "--report", dir / "report.jsonl"});
  REQUIRE(r.code == 0);
  const auto st = json::parse(r.out);
  CHECK(st["dataset"]["total"] == total);
}

TEST_CASE("stats mcnemar") {
  TempDir dir;
  std::string a;
  std::string b;
  for (int i = 0; i < 5; ++i) {
    const auto id = "s" + std::to_string(i);
    a += R"({"sent_id":")" + id + R"(","predicted":"positive","gold":"positive"})" "\n";
    b += R"({"sent_id":")" + id + R"(","predicted":"negative","gold":"positive"})" "\n";
  }
  write_file(dir / "a.jsonl", a);
  write_file(dir / "b.jsonl", b);
  const auto r = run({"stats", "--mcnemar", dir / "a.jsonl", dir / "b.jsonl"});
  REQUIRE(r.code == 0);
  const auto js = json::parse(r.out);
  CHECK(js["mcnemar"]["b"] == 5);
  CHECK(js["mcnemar"]["c"] == 0);
  CHECK(js["mcnemar"]["p_value"].get<double>() == doctest::Approx(0.0625));
}
