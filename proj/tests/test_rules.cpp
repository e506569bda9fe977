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
#include "folktale/rules.hpp"

using namespace folktale::rules;
using folktale::textpipe::Annotate;
using folktale::textpipe::NerGazetteer;

namespace {

folktale::ontology::KnowledgeBase LoadKb() {
  std::ifstream in(std::string(FOLKTALE_DATA_DIR) + "/folktale.ont");
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return folktale::ontology::ParseOntology(ss.str());
}

std::vector<const Annotation*> Find(const Document& doc,
                                    const std::string& kind) {
  std::vector<const Annotation*> out;
  for (const auto& a : doc.annotations)
    if (a.kind == kind) out.push_back(&a);
  return out;
}

}  // namespace

TEST_CASE("compile: minimal rule") {
  auto rules = CompileRules(
      "rule Def\nmatch {text=the} {chunk=I-NP}*\ncreate DefiniteNP\n");
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].name == "Def");
  REQUIRE(rules[0].pattern.size() == 2);
  CHECK(rules[0].pattern[1].quantifier == PatternElement::Quantifier::kStar);
  CHECK(rules[0].create_kind == "DefiniteNP");
}

TEST_CASE("compile: errors carry rule name and line") {
  try {
    CompileRules("rule Bad\nmatch {text=the}^\ncreate X\n");
    FAIL("expected RuleError");
  } catch (const RuleError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("Bad") != std::string::npos);
  }
  CHECK_THROWS_AS(CompileRules("rule A\ncreate X\n"), RuleError);
  CHECK_THROWS_AS(CompileRules("rule A\nmatch {frob=1}\ncreate X\n"),
                  RuleError);
  CHECK_THROWS_AS(CompileRules("match {text=a}\n"), RuleError);
}

TEST_CASE("compile: bundled rule files parse") {
  for (const char* f : {"/jn.rules", "/jc.rules", "/jr.rules"}) {
    auto rules = CompileRulesFile(std::string(FOLKTALE_DATA_DIR) + f);
    CHECK(!rules.empty());
  }
}

TEST_CASE("apply: definite nominal phrases") {
  auto doc = Annotate("t", "The daughter was afraid of the cold frog.");
  ApplyRules(&doc, CompileRulesFile(std::string(FOLKTALE_DATA_DIR) +
                                    "/jn.rules"));
  auto defs = Find(doc, "DefiniteNP");
  REQUIRE(defs.size() == 2);
  CHECK(doc.SpanText(defs[0]->first, defs[0]->last) == "The daughter");
  CHECK(doc.SpanText(defs[1]->first, defs[1]->last) == "the cold frog");
}

TEST_CASE("apply: indefinite and proper phrases") {
  auto doc = Annotate("t", "Faithful Henry saw a carriage.");
  ApplyRules(&doc, CompileRulesFile(std::string(FOLKTALE_DATA_DIR) +
                                    "/jn.rules"));
  auto indef = Find(doc, "IndefiniteNP");
  REQUIRE(indef.size() == 1);
  CHECK(doc.SpanText(indef[0]->first, indef[0]->last) == "a carriage");
  auto proper = Find(doc, "ProperNP");
  REQUIRE(proper.size() == 1);
  // Greedy quantifier takes the whole proper noun run.
  CHECK(doc.SpanText(proper[0]->first, proper[0]->last) == "Henry");
}

TEST_CASE("apply: candidate characters with concept copy and head span") {
  auto kb = LoadKb();
  auto doc = Annotate("t", "The young king called his daughter.");
  NerGazetteer(&doc, kb);
  ApplyRules(&doc, CompileRulesFile(std::string(FOLKTALE_DATA_DIR) +
                                    "/jc.rules"));
  auto cands = Find(doc, "CandidateCharacter");
  REQUIRE(cands.size() == 2);
  CHECK(doc.SpanText(cands[0]->first, cands[0]->last) == "king");
  CHECK(cands[0]->attrs.at("concept") == "King");
  CHECK(doc.SpanText(cands[1]->first, cands[1]->last) == "daughter");
  CHECK(cands[1]->attrs.at("concept") == "Daughter");
}

TEST_CASE("apply: proper name candidates have no concept") {
  auto kb = LoadKb();
  auto doc = Annotate("t", "Faithful Henry wept.");
  NerGazetteer(&doc, kb);
  ApplyRules(&doc, CompileRulesFile(std::string(FOLKTALE_DATA_DIR) +
                                    "/jc.rules"));
  auto cands = Find(doc, "CandidateCharacter");
  REQUIRE(cands.size() == 1);
  CHECK(doc.SpanText(cands[0]->first, cands[0]->last) == "Henry");
  CHECK(cands[0]->attrs.count("concept") == 0);
}

TEST_CASE("apply: genitive relation trigger") {
  auto kb = LoadKb();
  auto doc = Annotate("t", "The king's son heard a cracking.");
  NerGazetteer(&doc, kb);
  ApplyRules(&doc, CompileRulesFile(std::string(FOLKTALE_DATA_DIR) +
                                    "/jr.rules"));
  auto rels = Find(doc, "Relation");
  REQUIRE(rels.size() == 1);
  CHECK(rels[0]->attrs.at("rel") == "hasParent");
  CHECK(rels[0]->attrs.at("arg") == "last");
  CHECK(doc.SpanText(rels[0]->first, rels[0]->last) == "king's son");
}

TEST_CASE("apply: of-construction relation trigger") {
  auto kb = LoadKb();
  auto doc = Annotate("t", "The daughter of the king wept.");
  NerGazetteer(&doc, kb);
  ApplyRules(&doc, CompileRulesFile(std::string(FOLKTALE_DATA_DIR) +
                                    "/jr.rules"));
  auto rels = Find(doc, "Relation");
  REQUIRE(rels.size() == 1);
  CHECK(rels[0]->attrs.at("rel") == "hasParent");
  CHECK(rels[0]->attrs.at("arg") == "first");
}

TEST_CASE("apply: optional element backtracks") {
  auto rules = CompileRules(
      "rule R\nmatch {pos=DT}? {pos=NN}\ncreate Hit\n");
  auto doc = Annotate("t", "The frog slept in mud.");
  ApplyRules(&doc, rules);
  auto hits = Find(doc, "Hit");
  REQUIRE(hits.size() == 2);
  CHECK(doc.SpanText(hits[0]->first, hits[0]->last) == "The frog");
  CHECK(doc.SpanText(hits[1]->first, hits[1]->last) == "mud");
}

TEST_CASE("apply: matches never cross sentence boundaries") {
  auto rules = CompileRules("rule R\nmatch {pos=NN}+\ncreate Run\n");
  auto doc = Annotate("t", "He saw the frog. Mud covered the well.");
  ApplyRules(&doc, rules);
  for (const auto* a : Find(doc, "Run"))
    CHECK(doc.SentenceOf(a->first) == doc.SentenceOf(a->last));
}

TEST_CASE("property: rule application is idempotent") {
  auto kb = LoadKb();
  auto doc = Annotate(
      "t",
      "The king's daughter began to cry, for she was afraid of the cold "
      "frog. Faithful Henry helped them both in.");
  NerGazetteer(&doc, kb);
  std::vector<Rule> all;
  for (const char* f : {"/jn.rules", "/jc.rules", "/jr.rules"}) {
    auto r = CompileRulesFile(std::string(FOLKTALE_DATA_DIR) + f);
    all.insert(all.end(), r.begin(), r.end());
  }
  ApplyRules(&doc, all);
  auto before = doc.annotations;
  ApplyRules(&doc, all);
  CHECK(doc.annotations == before);
}
