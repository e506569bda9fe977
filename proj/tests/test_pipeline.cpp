// Copyright 2026 The Folktale Authors.
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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "folktale/pipeline.hpp"

using namespace folktale::pipeline;
namespace fs = std::filesystem;

namespace {

PipelineConfig BundledConfig() {
  PipelineConfig config;
  config.ontology = std::string(FOLKTALE_DATA_DIR) + "/folktale.ont";
  config.rules_dir = FOLKTALE_DATA_DIR;
  config.corpus = std::string(FOLKTALE_DATA_DIR) + "/corpus";
  config.out = (fs::temp_directory_path() / "folktale_pipeline_test").string();
  return config;
}

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& content) {
    path = fs::temp_directory_path() /
           ("folktale_cfg_" + std::to_string(::getpid()) + ".tmp");
    std::ofstream(path) << content;
  }
  ~TempFile() { fs::remove(path); }
};

}  // namespace

TEST_CASE("config: flat key = value with comments and overrides") {
  TempFile cfg(
      "# sample\n"
      "version = short\n"
      "jobs = 3\n"
      "weight.bias = 1.5\n");
  PipelineConfig config;
  LoadConfigFile(&config, cfg.path.string());
  CHECK_FALSE(config.long_version);
  CHECK(config.jobs == 3);
  CHECK(config.weights.bias == 1.5);
}

TEST_CASE("config: unknown keys and bad values are rejected") {
  PipelineConfig config;
  CHECK_THROWS_AS(ApplyConfigLine(&config, "frobnicate", "yes", 1),
                  ConfigError);
  CHECK_THROWS_AS(ApplyConfigLine(&config, "jobs", "zero", 2), ConfigError);
  CHECK_THROWS_AS(ApplyConfigLine(&config, "version", "medium", 3),
                  ConfigError);
  CHECK_THROWS_AS(ApplyConfigLine(&config, "weight.zeal", "1", 4), ConfigError);
  TempFile cfg("no equals sign here\n");
  CHECK_THROWS_AS(LoadConfigFile(&config, cfg.path.string()), ConfigError);
}

TEST_CASE("config: validation catches missing paths") {
  auto config = BundledConfig();
  config.ontology = "/definitely/not/here.ont";
  CHECK_THROWS_AS(ValidateConfig(config), ConfigError);
  config = BundledConfig();
  config.rules_dir = "/nope";
  CHECK_THROWS_AS(ValidateConfig(config), ConfigError);
  CHECK_NOTHROW(ValidateConfig(BundledConfig()));
}

TEST_CASE("atomic write: no leftover temporary") {
  auto dir = fs::temp_directory_path() / "folktale_atomic_test";
  fs::create_directories(dir);
  AtomicWrite(dir / "a.txt", "hello");
  CHECK(ReadFile((dir / "a.txt").string()) == "hello");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("run: story stage chain matches the standalone stages") {
  auto config = BundledConfig();
  auto resources = LoadResources(config);
  auto text = ReadFile(config.corpus + "/rapunzel.txt");
  auto art = RunStory("rapunzel", text, resources, config);

  // decoref stage alone produces the same rewritten text.
  auto doc = folktale::textpipe::Annotate("rapunzel", text);
  auto mentions = folktale::coref::DetectMentions(doc);
  auto chains = folktale::coref::Resolve(doc, mentions);
  CHECK(folktale::coref::Decoreference(doc, mentions, chains).text ==
        art.decoreferenced);

  // triplets stage on the rewritten text produces the same TSV.
  auto ddoc = folktale::textpipe::Annotate("rapunzel", art.decoreferenced);
  auto records = folktale::openie::ExtractTriplets(ddoc, config.weights);
  CHECK(folktale::openie::WriteTsv("rapunzel", records) == art.triplets);
}

TEST_CASE("run: corpus outputs land on disk and reruns are identical") {
  auto config = BundledConfig();
  auto resources = LoadResources(config);
  auto first = RunCorpus(config, resources);
  REQUIRE(!first.empty());
  for (const auto& art : first) {
    CHECK(ReadFile(config.out + "/" + art.doc_id + ".triplets.tsv") ==
          art.triplets);
    CHECK(ReadFile(config.out + "/" + art.doc_id + ".perspective.txt") ==
          art.perspectives);
  }
  CHECK(fs::exists(config.out + "/summary.tsv"));

  auto threaded = config;
  threaded.jobs = 4;
  auto second = RunCorpus(threaded, resources);
  REQUIRE(second.size() == first.size());
  for (size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].annotated == second[i].annotated);
    CHECK(first[i].perspectives == second[i].perspectives);
  }
  fs::remove_all(config.out);
}

TEST_CASE("eval: gold rows are scored against pipeline predictions") {
  auto config = BundledConfig();
  auto resources = LoadResources(config);
  auto gold = folktale::eval::ParseGold(
      ReadFile(std::string(FOLKTALE_DATA_DIR) + "/gold/gold.tsv"));
  REQUIRE(!gold.empty());
  auto report = EvaluateGold(config, resources, gold);
  std::istringstream tsv(report.tsv);
  std::string line;
  size_t rows = 0;
  while (std::getline(tsv, line)) ++rows;
  CHECK(rows == gold.size() + 1);  // one per gold row plus the average
  REQUIRE(report.average.accuracy);
  CHECK(*report.average.accuracy > 0.5);
}
