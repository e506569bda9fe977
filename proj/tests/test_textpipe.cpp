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
#include <set>
#include <sstream>

#include "doctest.h"
#include "folktale/textpipe.hpp"

using namespace folktale::textpipe;

namespace {

folktale::ontology::KnowledgeBase LoadKb() {
  std::ifstream in(std::string(FOLKTALE_DATA_DIR) + "/folktale.ont");
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return folktale::ontology::ParseOntology(ss.str());
}

std::vector<std::string> TokenTexts(const Document& doc) {
  std::vector<std::string> out;
  for (const auto& t : doc.tokens) out.push_back(t.text);
  return out;
}

}  // namespace

TEST_CASE("tokenize: possessive splits and spans are lossless") {
  std::string text = "The king's daughter";
  auto toks = Tokenize(text);
  REQUIRE(toks.size() == 4);
  CHECK(toks[0].text == "The");
  CHECK(toks[1].text == "king");
  CHECK(toks[2].text == "'s");
  CHECK(toks[3].text == "daughter");
  for (const auto& t : toks) CHECK(text.substr(t.begin, t.end - t.begin) == t.text);
  // Spans are ordered and non-overlapping.
  for (size_t i = 1; i < toks.size(); ++i) CHECK(toks[i].begin >= toks[i - 1].end);
}

TEST_CASE("tokenize: punctuation and quotes become separate tokens") {
  auto toks = Tokenize("\"No, master, it is not the carriage.\"");
  std::vector<std::string> texts;
  for (const auto& t : toks) texts.push_back(t.text);
  CHECK(texts.front() == "\"");
  CHECK(texts.back() == "\"");
  CHECK(std::count(texts.begin(), texts.end(), ",") == 2);
  CHECK(std::count(texts.begin(), texts.end(), ".") == 1);
}

TEST_CASE("sentences: abbreviations do not split") {
  auto doc = Annotate("t", "Mr. Smith left.");
  CHECK(doc.sentences.size() == 1);
}

TEST_CASE("sentences: terminators with trailing quote") {
  auto doc = Annotate("t", "He cried, \"The carriage is breaking!\" Then he wept.");
  REQUIRE(doc.sentences.size() == 2);
  // The closing quote belongs to the first sentence.
  CHECK(doc.tokens[doc.sentences[0].last].text == "\"");
}

TEST_CASE("sentences: narrative fragment splits into many sentences") {
  std::string text =
      "Then they went to sleep, and next morning the sun awoke them. "
      "Faithful Henry had been so unhappy. The carriage was to conduct "
      "the young king into his kingdom. Faithful Henry helped them both "
      "in. And when they had driven a part of the way the king's son "
      "heard a cracking behind him. So he turned round and cried, "
      "\"Henry, the carriage is breaking.\" \"No, master, it is not the "
      "carriage.\" Again something cracked, and the carriage was breaking.";
  auto doc = Annotate("t", text);
  CHECK(doc.sentences.size() >= 8);
}

TEST_CASE("pos: strawberry sentence") {
  auto doc =
      Annotate("t", "Good heavens, said the girl, no strawberries grow in winter.");
  REQUIRE(doc.sentences.size() == 1);
  CHECK(PosString(doc, doc.sentences[0]) ==
        "JJ NNS , VBD DT NN , DT NNS VB IN NN .");
}

TEST_CASE("pos and chunks: rapunzel sentence") {
  auto doc =
      Annotate("t", "Rapunzel grew into the most beautiful child under the sun.");
  REQUIRE(doc.sentences.size() == 1);
  CHECK(PosString(doc, doc.sentences[0]) ==
        "NNP VBD IN DT RBS JJ NN IN DT NN .");
  CHECK(ChunkString(doc, doc.sentences[0]) ==
        "B-NP B-VP B-PP B-NP I-NP I-NP I-NP B-PP B-NP I-NP O");
}

TEST_CASE("pos: genitive noun phrase") {
  auto doc = Annotate("t", "The king's daughter began to cry.");
  auto& s = doc.sentences[0];
  CHECK(PosString(doc, s) == "DT NN POS NN VBD TO VB .");
  CHECK(ChunkString(doc, s) == "B-NP I-NP I-NP I-NP B-VP I-VP I-VP O");
}

TEST_CASE("pos: participle after auxiliary") {
  auto doc = Annotate("t", "When everything was stowed on board a ship.");
  CHECK(doc.tokens[3].text == "stowed");
  CHECK(doc.tokens[3].pos == "VBN");

  auto doc2 = Annotate("t", "His master was changed into a frog.");
  CHECK(doc2.tokens[3].pos == "VBN");
}

TEST_CASE("pos: her is possessive only before a nominal") {
  auto doc = Annotate("t", "She took her pretty bed and he led her away.");
  size_t first = 2, second = 8;
  REQUIRE(doc.tokens[first].text == "her");
  REQUIRE(doc.tokens[second].text == "her");
  CHECK(doc.tokens[first].pos == "PRP$");
  CHECK(doc.tokens[second].pos == "PRP");
}

TEST_CASE("pos: unknown capitalized words are proper nouns") {
  auto doc = Annotate("t", "Rapunzel met Grethel.");
  CHECK(doc.tokens[0].pos == "NNP");
  CHECK(doc.tokens[2].pos == "NNP");
}

TEST_CASE("lemma: irregular and suffix forms") {
  auto doc = Annotate(
      "t", "They went away and said the strawberries grew while the children slept.");
  std::map<std::string, std::string> got;
  for (const auto& t : doc.tokens) got[t.text] = t.lemma;
  CHECK(got["went"] == "go");
  CHECK(got["said"] == "say");
  CHECK(got["strawberries"] == "strawberry");
  CHECK(got["grew"] == "grow");
  CHECK(got["children"] == "child");
}

TEST_CASE("lemma: verbal inflection stripping") {
  auto doc = Annotate("t", "A carriage came driving up and the bands were springing.");
  std::map<std::string, std::string> got;
  for (const auto& t : doc.tokens) got[t.text] = t.lemma;
  CHECK(got["driving"] == "drive");
  CHECK(got["springing"] == "spring");
  CHECK(got["bands"] == "band");
  CHECK(got["came"] == "come");
}

TEST_CASE("chunks: copula with predicate adjective") {
  auto doc = Annotate("t", "The daughter was afraid of the cold frog.");
  auto& s = doc.sentences[0];
  CHECK(ChunkString(doc, s) ==
        "B-NP I-NP B-VP B-ADJP B-PP B-NP I-NP I-NP O");
}

TEST_CASE("chunks: verb group with infinitive extension") {
  auto doc = Annotate("t", "She began to cry.");
  CHECK(doc.tokens[1].chunk == "B-VP");
  CHECK(doc.tokens[2].chunk == "I-VP");
  CHECK(doc.tokens[3].chunk == "I-VP");
}

TEST_CASE("property: chunk tags form a valid BIO sequence") {
  std::string text =
      "Faithful Henry had been so unhappy when his master was changed into "
      "a frog, that he had caused three iron bands to be laid round his "
      "heart, lest it should burst with grief and sadness. The king's son "
      "ascended, but instead of finding his dearest Rapunzel, he found the "
      "enchantress, who gazed at him with wicked and venomous looks.";
  auto doc = Annotate("t", text);
  static const std::set<std::string> kPenn = {
      "CC", "CD", "DT", "EX", "IN", "JJ", "JJR", "JJS", "MD", "NN", "NNS",
      "NNP", "NNPS", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "TO",
      "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP", "WP$",
      "WRB", ".", ",", ":", "''", "(", ")"};
  for (const auto& s : doc.sentences) {
    std::string prev = "O";
    for (size_t i = s.first; i <= s.last; ++i) {
      const std::string& c = doc.tokens[i].chunk;
      CHECK(kPenn.count(doc.tokens[i].pos) == 1);
      REQUIRE(!c.empty());
      if (c[0] == 'I') {
        REQUIRE(prev.size() > 1);
        CHECK(prev.substr(1) == c.substr(1));
        CHECK((prev[0] == 'B' || prev[0] == 'I'));
      }
      prev = c;
    }
  }
}

TEST_CASE("property: token spans reconstruct the text") {
  std::string text =
      "So he turned round and cried, \"Henry, the carriage is breaking.\"";
  auto doc = Annotate("t", text);
  size_t cursor = 0;
  for (const auto& t : doc.tokens) {
    CHECK(t.begin >= cursor);
    // Only whitespace between consecutive tokens.
    for (size_t i = cursor; i < t.begin; ++i)
      CHECK(std::isspace(static_cast<unsigned char>(text[i])));
    CHECK(text.substr(t.begin, t.end - t.begin) == t.text);
    cursor = t.end;
  }
}

TEST_CASE("ner: ontology concepts, numbers, and temporals") {
  auto kb = LoadKb();
  auto doc = Annotate("t", "One morning the king gave his daughter an oven.");
  NerGazetteer(&doc, kb);

  auto find = [&](const std::string& kind, const std::string& word) {
    for (const auto& a : doc.annotations)
      if (a.kind == kind && doc.tokens[a.first].text == word) return &a;
    return static_cast<const Annotation*>(nullptr);
  };

  auto* king = find("Entity", "king");
  REQUIRE(king != nullptr);
  CHECK(king->attrs.at("concept") == "King");
  CHECK(king->attrs.at("cat") == "character");

  auto* daughter = find("Entity", "daughter");
  REQUIRE(daughter != nullptr);
  CHECK(daughter->attrs.at("concept") == "Daughter");
  CHECK(daughter->attrs.at("cat") == "character");

  // Inanimate objects are annotated but not character-like.
  auto* oven = find("Entity", "oven");
  REQUIRE(oven != nullptr);
  CHECK(oven->attrs.at("cat") == "other");

  CHECK(find("Number", "One") != nullptr);
  CHECK(find("Temporal", "morning") != nullptr);
}

TEST_CASE("ner: plural surface forms match via lemma") {
  auto kb = LoadKb();
  auto doc = Annotate("t", "The queens spoke to the frogs.");
  NerGazetteer(&doc, kb);
  std::set<std::string> concepts;
  for (const auto& a : doc.annotations)
    if (a.kind == "Entity") concepts.insert(a.attrs.at("concept"));
  CHECK(concepts.count("Queen") == 1);
  CHECK(concepts.count("Frog") == 1);
}

TEST_CASE("ner: idempotent on repeated application") {
  auto kb = LoadKb();
  auto doc = Annotate("t", "The king saw a witch.");
  NerGazetteer(&doc, kb);
  auto before = doc.annotations;
  NerGazetteer(&doc, kb);
  CHECK(doc.annotations == before);
}

TEST_CASE("dump: one token per line with sentence breaks") {
  auto doc = Annotate("t", "He wept. She slept.");
  std::string dump = DumpAnnotated(doc);
  std::istringstream in(dump);
  std::string line;
  int blank = 0, rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      ++blank;
      continue;
    }
    ++rows;
    CHECK(std::count(line.begin(), line.end(), '\t') == 6);
  }
  CHECK(rows == 6);
  CHECK(blank == 2);
}
