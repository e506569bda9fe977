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

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "folktale/narrative.hpp"

using namespace folktale::narrative;
using folktale::textpipe::Annotate;

namespace {

struct Fixture {
  folktale::ontology::KnowledgeBase kb;
  std::vector<folktale::rules::Rule> jn, jc, jr;

  Fixture() {
    std::ifstream in(std::string(FOLKTALE_DATA_DIR) + "/folktale.ont");
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    kb = folktale::ontology::ParseOntology(ss.str());
    jn = folktale::rules::CompileRulesFile(std::string(FOLKTALE_DATA_DIR) +
                                           "/jn.rules");
    jc = folktale::rules::CompileRulesFile(std::string(FOLKTALE_DATA_DIR) +
                                           "/jc.rules");
    jr = folktale::rules::CompileRulesFile(std::string(FOLKTALE_DATA_DIR) +
                                           "/jr.rules");
  }

  std::vector<CharacterRecord> Extract(Document* doc) {
    folktale::textpipe::NerGazetteer(doc, kb);
    return ExtractCharacters(&kb, doc, jn, jc, jr);
  }
};

const CharacterRecord* FindChar(const std::vector<CharacterRecord>& chars,
                                const std::string& name) {
  for (const auto& c : chars)
    if (c.canonical_name == name) return &c;
  return nullptr;
}

std::string ReadCorpus(const std::string& name) {
  std::ifstream in(std::string(FOLKTALE_DATA_DIR) + "/corpus/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("characters: genitive daughter is classified and related") {
  Fixture fx;
  auto doc = Annotate("t", "The king's daughter began to cry.");
  auto chars = fx.Extract(&doc);

  auto* daughter = FindChar(chars, "daughter");
  REQUIRE(daughter != nullptr);
  for (const char* c : {"Daughter", "Girl", "Child", "Maiden"})
    CHECK_MESSAGE(daughter->concepts.count(c) == 1, c);

  auto* king = FindChar(chars, "king");
  REQUIRE(king != nullptr);
  CHECK(king->concepts.count("King") == 1);
  // The genitive trigger asserted the parent relation.
  CHECK(fx.kb.role_assertions.count({"hasParent", "t:daughter", "t:king"}) ==
        1);
}

TEST_CASE("characters: empty document yields none") {
  Fixture fx;
  auto doc = Annotate("t", "");
  CHECK(fx.Extract(&doc).empty());
}

TEST_CASE("characters: narrative fragment includes Henry") {
  Fixture fx;
  auto doc = Annotate("frog_king", ReadCorpus("frog_king.txt"));
  auto chars = fx.Extract(&doc);

  auto* henry = FindChar(chars, "Henry");
  REQUIRE(henry != nullptr);
  CHECK(henry->aliases.count("Faithful Henry") == 1);
  CHECK(henry->mention_spans.size() >= 3);
  CHECK(henry->source_doc == "frog_king");

  // Other cast members surface as well.
  CHECK(FindChar(chars, "king") != nullptr);
}

TEST_CASE("characters: mentions stay within the source document") {
  Fixture fx;
  auto doc = Annotate("a", "The king slept.");
  auto other = Annotate("b", "The king awoke. The king ate.");
  auto chars_a = fx.Extract(&doc);
  auto chars_b = fx.Extract(&other);
  REQUIRE(FindChar(chars_a, "king") != nullptr);
  CHECK(FindChar(chars_a, "king")->mention_spans.size() == 1);
  CHECK(FindChar(chars_b, "king")->mention_spans.size() == 2);
  // Distinct individuals per document.
  CHECK(FindChar(chars_a, "king")->individual_id !=
        FindChar(chars_b, "king")->individual_id);
}

TEST_CASE("perspective: long and short versions for Henry") {
  Fixture fx;
  auto doc = Annotate("frog_king", ReadCorpus("frog_king.txt"));
  auto chars = fx.Extract(&doc);
  auto* henry = FindChar(chars, "Henry");
  REQUIRE(henry != nullptr);

  auto mentions = folktale::coref::DetectMentions(doc);
  auto chains = folktale::coref::Resolve(doc, mentions);
  auto rewritten = folktale::coref::Decoreference(doc, mentions, chains);
  auto ddoc = Annotate("frog_king", rewritten.text);
  auto records = folktale::openie::ExtractTriplets(ddoc);
  REQUIRE(!records.empty());

  auto long_reports = FindPerspective({*henry}, records, true);
  REQUIRE(long_reports.size() == 1);
  CHECK(!long_reports[0].items.empty());
  for (const auto& item : long_reports[0].items)
    CHECK(detail::ContainsName(item, "henry"));

  auto short_reports = FindPerspective({*henry}, records, false);
  REQUIRE(short_reports.size() == 1);
  bool joy = false;
  for (const auto& item : short_reports[0].items)
    if (item.find("full of joy") != std::string::npos) joy = true;
  CHECK(joy);
}

TEST_CASE("perspective: literal mention recall on record sentences") {
  Fixture fx;
  auto doc = Annotate("frog_king", ReadCorpus("frog_king.txt"));
  auto chars = fx.Extract(&doc);
  auto records = folktale::openie::ExtractTriplets(doc);
  for (const auto& c : chars) {
    auto reports = FindPerspective({c}, records, true);
    for (const auto& r : records) {
      if (!detail::ContainsName(r.original_sentence, c.canonical_name))
        continue;
      CHECK(std::find(reports[0].items.begin(), reports[0].items.end(),
                      r.original_sentence) != reports[0].items.end());
    }
  }
}

TEST_CASE("perspective: no match yields the explicit marker") {
  CharacterRecord ghost;
  ghost.canonical_name = "waiting-maid";
  ghost.aliases = {"waiting-maid"};
  auto doc = Annotate("t", "The king slept in the kingdom.");
  auto records = folktale::openie::ExtractTriplets(doc);
  auto reports = FindPerspective({ghost}, records, true);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].items.empty());
  auto rendered = RenderPerspective(reports[0]);
  CHECK(rendered.find(kNoPerspectiveMarker) != std::string::npos);
}

TEST_CASE("matching: token boundaries block substring hits") {
  CHECK(detail::ContainsName("the king slept", "king"));
  CHECK(detail::ContainsName("The King slept", "king"));
  CHECK(detail::ContainsName("the king's son", "king"));
  CHECK_FALSE(detail::ContainsName("into his kingdom", "king"));
  CHECK_FALSE(detail::ContainsName("the waiting-maid", "maid"));
  CHECK(detail::ContainsName("the waiting-maid", "waiting-maid"));
}

TEST_CASE("render: character report lines") {
  Fixture fx;
  auto doc = Annotate("t", "The king's daughter began to cry.");
  auto chars = fx.Extract(&doc);
  auto text = RenderCharacters(chars);
  std::istringstream in(text);
  std::string line;
  size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(std::count(line.begin(), line.end(), '\t') == 3);
  }
  CHECK(lines == chars.size());
  CHECK(text.find("Daughter") != std::string::npos);
}
