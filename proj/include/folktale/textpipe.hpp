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

#ifndef FOLKTALE_TEXTPIPE_HPP_
#define FOLKTALE_TEXTPIPE_HPP_

// Deterministic rule-based text processing: tokenization, sentence
// splitting, Penn-tagset POS tagging, lemmatization, BIO chunking, and
// gazetteer named entity recognition against the ontology.

#include <algorithm>
#include <cctype>
#include <cstring>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "folktale/ontology.hpp"

namespace folktale {
namespace textpipe {

struct Token {
  std::string text;
  size_t begin = 0;  // byte offsets into the source text
  size_t end = 0;
  std::string pos;
  std::string lemma;
  std::string chunk;
};

struct Sentence {
  size_t first = 0;  // token indices, inclusive
  size_t last = 0;
  size_t index = 0;
};

// A stand-off annotation over a token range within one sentence.
struct Annotation {
  std::string kind;
  size_t first = 0;
  size_t last = 0;  // inclusive
  std::map<std::string, std::string> attrs;

  bool operator==(const Annotation& o) const {
    return kind == o.kind && first == o.first && last == o.last &&
           attrs == o.attrs;
  }
};

struct Document {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<Sentence> sentences;
  std::vector<Annotation> annotations;

  // Sentence index containing token `t`, or npos.
  size_t SentenceOf(size_t t) const {
    for (const auto& s : sentences)
      if (t >= s.first && t <= s.last) return s.index;
    return std::string::npos;
  }

  std::string SpanText(size_t first, size_t last) const {
    if (first > last || last >= tokens.size()) return "";
    return text.substr(tokens[first].begin,
                       tokens[last].end - tokens[first].begin);
  }

  std::string SentenceString(const Sentence& s) const {
    return SpanText(s.first, s.last);
  }

  bool HasAnnotation(const Annotation& a) const {
    return std::find(annotations.begin(), annotations.end(), a) !=
           annotations.end();
  }
};

namespace lex {

inline bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-';
}

inline std::string Lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline bool IsCapitalized(const std::string& s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

inline bool EndsWith(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// Closed-class and corpus lexicon, lowercased word to Penn tag.
inline const std::map<std::string, std::string>& WordTags() {
  static const std::map<std::string, std::string> kTags = {
      // Determiners.
      {"the", "DT"}, {"a", "DT"}, {"an", "DT"}, {"no", "DT"}, {"this", "DT"},
      {"these", "DT"}, {"those", "DT"}, {"each", "DT"}, {"every", "DT"},
      {"all", "DT"}, {"both", "DT"}, {"some", "DT"}, {"any", "DT"},
      {"another", "DT"},
      // Pronouns.
      {"he", "PRP"}, {"she", "PRP"}, {"it", "PRP"}, {"they", "PRP"},
      {"them", "PRP"}, {"him", "PRP"}, {"i", "PRP"}, {"you", "PRP"},
      {"we", "PRP"}, {"me", "PRP"}, {"us", "PRP"}, {"himself", "PRP"},
      {"herself", "PRP"}, {"itself", "PRP"}, {"themselves", "PRP"},
      {"myself", "PRP"}, {"yourself", "PRP"}, {"ourselves", "PRP"},
      {"his", "PRP$"}, {"its", "PRP$"}, {"their", "PRP$"}, {"my", "PRP$"},
      {"your", "PRP$"}, {"our", "PRP$"}, {"her", "PRP$"},
      {"who", "WP"}, {"whom", "WP"}, {"what", "WP"}, {"whose", "WP$"},
      {"which", "WDT"}, {"there", "EX"},
      // Modals, particles, conjunctions.
      {"will", "MD"}, {"would", "MD"}, {"shall", "MD"}, {"should", "MD"},
      {"may", "MD"}, {"might", "MD"}, {"must", "MD"}, {"can", "MD"},
      {"could", "MD"}, {"to", "TO"},
      {"and", "CC"}, {"but", "CC"}, {"or", "CC"}, {"nor", "CC"},
      {"up", "RP"}, {"out", "RP"}, {"off", "RP"}, {"down", "RP"},
      {"away", "RP"},
      // Prepositions and subordinators.
      {"in", "IN"}, {"into", "IN"}, {"of", "IN"}, {"on", "IN"},
      {"upon", "IN"}, {"at", "IN"}, {"by", "IN"}, {"for", "IN"},
      {"with", "IN"}, {"from", "IN"}, {"under", "IN"}, {"over", "IN"},
      {"behind", "IN"}, {"round", "IN"}, {"about", "IN"}, {"as", "IN"},
      {"if", "IN"}, {"because", "IN"}, {"while", "IN"}, {"after", "IN"},
      {"before", "IN"}, {"since", "IN"}, {"until", "IN"}, {"lest", "IN"},
      {"towards", "IN"}, {"toward", "IN"}, {"during", "IN"},
      {"against", "IN"}, {"among", "IN"}, {"between", "IN"},
      {"through", "IN"}, {"that", "IN"}, {"though", "IN"},
      {"although", "IN"}, {"like", "IN"}, {"near", "IN"},
      {"without", "IN"}, {"within", "IN"}, {"beside", "IN"},
      // Adverbs.
      {"not", "RB"}, {"now", "RB"}, {"again", "RB"}, {"then", "RB"},
      {"never", "RB"}, {"here", "RB"}, {"so", "RB"}, {"very", "RB"},
      {"too", "RB"}, {"only", "RB"}, {"just", "RB"}, {"once", "RB"},
      {"quite", "RB"}, {"instead", "RB"}, {"also", "RB"}, {"still", "RB"},
      {"almost", "RB"}, {"always", "RB"}, {"soon", "RB"}, {"ever", "RB"},
      {"when", "WRB"}, {"where", "WRB"}, {"how", "WRB"}, {"why", "WRB"},
      {"more", "RBR"}, {"most", "RBS"},
      {"oh", "UH"}, {"ah", "UH"}, {"alas", "UH"},
      // Numbers.
      {"one", "CD"}, {"two", "CD"}, {"three", "CD"}, {"four", "CD"},
      {"five", "CD"}, {"six", "CD"}, {"seven", "CD"}, {"eight", "CD"},
      {"nine", "CD"}, {"ten", "CD"}, {"eleven", "CD"}, {"twelve", "CD"},
      // Adjectives.
      {"good", "JJ"}, {"beautiful", "JJ"}, {"white", "JJ"}, {"golden", "JJ"},
      {"young", "JJ"}, {"faithful", "JJ"}, {"unhappy", "JJ"}, {"cold", "JJ"},
      {"pretty", "JJ"}, {"clean", "JJ"}, {"little", "JJ"}, {"great", "JJ"},
      {"wicked", "JJ"}, {"venomous", "JJ"}, {"old", "JJ"}, {"big", "JJ"},
      {"small", "JJ"}, {"dark", "JJ"}, {"deep", "JJ"}, {"high", "JJ"},
      {"poor", "JJ"}, {"dear", "JJ"}, {"sweet", "JJ"}, {"long", "JJ"},
      {"hard", "JJ"}, {"rich", "JJ"}, {"happy", "JJ"}, {"sad", "JJ"},
      {"free", "JJ"}, {"whole", "JJ"}, {"full", "JJ"}, {"afraid", "JJ"},
      {"glad", "JJ"}, {"same", "JJ"}, {"next", "JJ"}, {"last", "JJ"},
      {"first", "JJ"}, {"other", "JJ"}, {"such", "JJ"}, {"wild", "JJ"},
      {"fair", "JJ"}, {"evil", "JJ"}, {"brave", "JJ"}, {"strong", "JJ"},
      {"iron", "JJ"}, {"many", "JJ"}, {"magic", "JJ"}, {"ostrich", "JJ"},
      // Copulas and auxiliaries.
      {"am", "VBP"}, {"is", "VBZ"}, {"are", "VBP"}, {"was", "VBD"},
      {"were", "VBD"}, {"be", "VB"}, {"been", "VBN"}, {"being", "VBG"},
      {"has", "VBZ"}, {"have", "VB"}, {"had", "VBD"},
      {"does", "VBZ"}, {"do", "VB"}, {"did", "VBD"},
      // Irregular pasts.
      {"said", "VBD"}, {"went", "VBD"}, {"came", "VBD"}, {"stood", "VBD"},
      {"took", "VBD"}, {"led", "VBD"}, {"kept", "VBD"}, {"sat", "VBD"},
      {"heard", "VBD"}, {"thought", "VBD"}, {"found", "VBD"},
      {"began", "VBD"}, {"grew", "VBD"}, {"awoke", "VBD"}, {"broke", "VBD"},
      {"fell", "VBD"}, {"felt", "VBD"}, {"got", "VBD"}, {"gave", "VBD"},
      {"knew", "VBD"}, {"made", "VBD"}, {"ran", "VBD"}, {"saw", "VBD"},
      {"sent", "VBD"}, {"told", "VBD"}, {"wept", "VBD"}, {"slept", "VBD"},
      {"ate", "VBD"}, {"drank", "VBD"}, {"sprang", "VBD"}, {"sang", "VBD"},
      {"flew", "VBD"}, {"drove", "VBD"}, {"brought", "VBD"},
      {"caught", "VBD"}, {"put", "VBD"}, {"set", "VBD"}, {"left", "VBD"},
      {"met", "VBD"}, {"meet", "VB"},
      {"become", "VB"}, {"became", "VBD"}, {"spoke", "VBD"},
      // Participles.
      {"done", "VBN"}, {"taken", "VBN"}, {"given", "VBN"}, {"known", "VBN"},
      {"seen", "VBN"}, {"gone", "VBN"}, {"broken", "VBN"}, {"laid", "VBN"},
      {"hidden", "VBN"}, {"forgotten", "VBN"}, {"written", "VBN"},
      {"born", "VBN"},
      // Base verbs.
      {"go", "VB"}, {"come", "VB"}, {"stand", "VB"}, {"take", "VB"},
      {"keep", "VB"}, {"sit", "VB"}, {"hear", "VB"}, {"think", "VB"},
      {"find", "VB"}, {"begin", "VB"}, {"grow", "VB"}, {"awake", "VB"},
      {"break", "VB"}, {"fall", "VB"}, {"feel", "VB"}, {"get", "VB"},
      {"give", "VB"}, {"know", "VB"}, {"run", "VB"}, {"see", "VB"},
      {"send", "VB"}, {"tell", "VB"}, {"leave", "VB"}, {"weep", "VB"},
      {"sleep", "VB"}, {"eat", "VB"}, {"drink", "VB"}, {"spring", "VB"},
      {"sing", "VB"}, {"fly", "VB"}, {"drive", "VB"}, {"bring", "VB"},
      {"catch", "VB"}, {"cry", "VB"}, {"conduct", "VB"}, {"help", "VB"},
      {"place", "VB"}, {"burst", "VB"}, {"buy", "VB"}, {"touch", "VB"},
      {"visit", "VB"}, {"stay", "VB"}, {"watch", "VB"}, {"look", "VB"},
      {"marry", "VB"}, {"live", "VB"}, {"fear", "VB"}, {"let", "VB"},
      {"fetch", "VB"}, {"say", "VB"}, {"search", "VB"}, {"want", "VB"},
      {"call", "VB"}, {"ask", "VB"}, {"answer", "VB"}, {"open", "VB"},
      {"climb", "VB"}, {"wait", "VB"}, {"turn", "VB"}, {"walk", "VB"},
      {"ride", "VB"}, {"wish", "VB"}, {"promise", "VB"}, {"die", "VB"},
      {"kill", "VB"}, {"save", "VB"}, {"seek", "VB"}, {"carry", "VB"},
      {"hold", "VB"}, {"throw", "VB"}, {"pull", "VB"}, {"push", "VB"},
      {"laugh", "VB"},
      // Nouns the suffix rules would mistag.
      {"morning", "NN"}, {"evening", "NN"}, {"everything", "NN"},
      {"nothing", "NN"}, {"something", "NN"}, {"anything", "NN"},
      {"wedding", "NN"}, {"king", "NN"}, {"ring", "NN"}, {"thing", "NN"},
  };
  return kTags;
}

// Irregular lemma lexicon, lowercased inflected form to lemma.
inline const std::map<std::string, std::string>& IrregularLemmas() {
  static const std::map<std::string, std::string> kLemmas = {
      {"said", "say"},    {"went", "go"},     {"came", "come"},
      {"stood", "stand"}, {"took", "take"},   {"led", "lead"},
      {"kept", "keep"},   {"sat", "sit"},     {"heard", "hear"},
      {"thought", "think"}, {"found", "find"}, {"began", "begin"},
      {"grew", "grow"},   {"awoke", "awake"}, {"broke", "break"},
      {"broken", "break"}, {"fell", "fall"},  {"felt", "feel"},
      {"got", "get"},     {"gave", "give"},   {"knew", "know"},
      {"made", "make"},   {"ran", "run"},     {"saw", "see"},
      {"sent", "send"},   {"told", "tell"},   {"left", "leave"},
      {"wept", "weep"},   {"slept", "sleep"}, {"ate", "eat"},
      {"drank", "drink"}, {"sprang", "spring"}, {"sang", "sing"},
      {"flew", "fly"},    {"drove", "drive"}, {"brought", "bring"},
      {"caught", "catch"}, {"was", "be"},     {"were", "be"},
      {"been", "be"},     {"is", "be"},       {"are", "be"},
      {"am", "be"},       {"being", "be"},    {"has", "have"},
      {"had", "have"},    {"did", "do"},      {"does", "do"},
      {"laid", "lay"},    {"done", "do"},     {"taken", "take"},
      {"given", "give"},  {"known", "know"},  {"seen", "see"},
      {"gone", "go"},     {"became", "become"}, {"spoke", "speak"},
      {"children", "child"}, {"men", "man"},  {"women", "woman"},
      {"feet", "foot"},   {"geese", "goose"}, {"mice", "mouse"},
      {"wives", "wife"},  {"lives", "life"},  {"an", "a"},
      {"caused", "cause"}, {"placed", "place"}, {"changed", "change"},
      {"gazed", "gaze"},  {"driving", "drive"}, {"breaking", "break"},
      {"springing", "spring"}, {"finding", "find"}, {"waiting", "wait"},
      {"making", "make"}, {"cried", "cry"},   {"ascended", "ascend"},
      {"conducted", "conduct"}, {"forced", "force"}, {"stowed", "stow"},
      {"harnessed", "harness"}, {"imprisoned", "imprison"},
  };
  return kLemmas;
}

// Temporal expression lexicon for NER.
inline const std::set<std::string>& TemporalWords() {
  static const std::set<std::string> kWords = {
      "morning", "evening",  "night",     "day",    "winter", "summer",
      "autumn",  "noon",     "midnight",  "today",  "tomorrow",
      "yesterday", "year",   "month",     "week",   "hour",   "dawn",
      "dusk"};
  return kWords;
}

inline const std::set<std::string>& Abbreviations() {
  static const std::set<std::string> kAbbrev = {"mr", "mrs", "dr",  "st",
                                                "prof", "sr",  "jr", "etc"};
  return kAbbrev;
}

}  // namespace lex

// ---------------------------------------------------------------------------
// Tokenization.
// ---------------------------------------------------------------------------

// Splits text into word and punctuation tokens with byte spans. Possessive
// 's becomes its own token; internal hyphens are kept.
inline std::vector<Token> Tokenize(const std::string& text) {
  std::vector<Token> tokens;
  size_t i = 0;
  auto emit = [&](size_t b, size_t e) {
    if (e > b) tokens.push_back({text.substr(b, e - b), b, e, "", "", ""});
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (lex::IsWordChar(c)) {
      size_t b = i;
      while (i < text.size() &&
             (lex::IsWordChar(text[i]) ||
              // Keep apostrophes inside words for now; split below.
              (text[i] == '\'' && i + 1 < text.size() &&
               lex::IsWordChar(text[i + 1]))))
        ++i;
      size_t e = i;
      // Trim leading/trailing hyphens.
      while (b < e && text[b] == '-') emit(b, b + 1), ++b;
      // Possessive or contracted 's splits off.
      if (e - b > 2 && text[e - 2] == '\'' &&
          (text[e - 1] == 's' || text[e - 1] == 'S')) {
        emit(b, e - 2);
        emit(e - 2, e);
      } else {
        emit(b, e);
      }
    } else {
      emit(i, i + 1);
      ++i;
    }
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Sentence splitting.
// ---------------------------------------------------------------------------

inline std::vector<Sentence> SplitSentences(const std::vector<Token>& tokens) {
  std::vector<Sentence> sentences;
  size_t start = 0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i].text;
    bool boundary = false;
    if (t == "!" || t == "?") boundary = true;
    if (t == ".") {
      boundary = true;
      if (i > 0 && lex::Abbreviations().count(lex::Lower(tokens[i - 1].text)))
        boundary = false;
    }
    if (boundary) {
      // A closing quote stays with the sentence it ends.
      while (i + 1 < tokens.size() &&
             (tokens[i + 1].text == "\"" || tokens[i + 1].text == "'"))
        ++i;
      sentences.push_back({start, i, sentences.size()});
      start = i + 1;
    }
  }
  if (start < tokens.size())
    sentences.push_back({start, tokens.size() - 1, sentences.size()});
  return sentences;
}

// ---------------------------------------------------------------------------
// POS tagging.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string PunctTag(const std::string& t) {
  if (t == "." || t == "!" || t == "?") return ".";
  if (t == ",") return ",";
  if (t == ";" || t == ":") return ":";
  if (t == "\"" || t == "'" || t == "`") return "''";
  if (t == "(") return "(";
  if (t == ")") return ")";
  return "";
}

inline bool AllDigits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c);
  });
}

inline std::string GuessTag(const Token& tok) {
  const std::string& t = tok.text;
  std::string lower = lex::Lower(t);
  if (!detail::PunctTag(t).empty()) return detail::PunctTag(t);
  if (t == "'s") return "POS";
  auto it = lex::WordTags().find(lower);
  if (it != lex::WordTags().end()) return it->second;
  if (AllDigits(t)) return "CD";
  if (lex::IsCapitalized(t)) {
    if (t.size() >= 4 && lex::EndsWith(lower, "s") &&
        !lex::EndsWith(lower, "ss"))
      return "NNPS";
    return "NNP";
  }
  if (t.size() > 5 && lex::EndsWith(lower, "ing")) return "VBG";
  if (t.size() > 4 && lex::EndsWith(lower, "ed")) return "VBD";
  if (t.size() > 3 && lex::EndsWith(lower, "ly")) return "RB";
  if (t.size() > 4 && lex::EndsWith(lower, "est")) return "JJS";
  if (lex::EndsWith(lower, "ful") || lex::EndsWith(lower, "ous") ||
      lex::EndsWith(lower, "able") || lex::EndsWith(lower, "ible"))
    return "JJ";
  if (lex::EndsWith(lower, "ies") && t.size() > 4) return "NNS";
  if (lex::EndsWith(lower, "s") && t.size() > 2 &&
      !lex::EndsWith(lower, "ss") && !lex::EndsWith(lower, "us") &&
      !lex::EndsWith(lower, "is"))
    return "NNS";
  return "NN";
}

inline bool IsBeOrHave(const std::string& lower) {
  static const std::set<std::string> kForms = {"be",  "is",  "are", "was",
                                               "were", "am",  "been", "being",
                                               "have", "has", "had"};
  return kForms.count(lower) > 0;
}

}  // namespace detail

// Deterministic lexicon-and-rule tagger: lexicon lookup, capitalization,
// suffix heuristics, noun default, then two context adjustments.
inline void PosTag(Document* doc) {
  auto& toks = doc->tokens;
  for (auto& t : toks) t.pos = detail::GuessTag(t);

  for (size_t i = 0; i < toks.size(); ++i) {
    // Past forms after be/have (optionally over adverbs) are participles.
    if (toks[i].pos == "VBD") {
      size_t j = i;
      while (j > 0 && (toks[j - 1].pos == "RB" || toks[j - 1].pos == "RBS"))
        --j;
      if (j > 0 && detail::IsBeOrHave(lex::Lower(toks[j - 1].text)))
        toks[i].pos = "VBN";
    }
    // A base verb form right after a preposition, determiner, or
    // possessive is a noun ("in turn", "the catch").
    if (toks[i].pos == "VB" && i > 0 &&
        (toks[i - 1].pos == "IN" || toks[i - 1].pos == "DT" ||
         toks[i - 1].pos == "PRP$"))
      toks[i].pos = "NN";
    // "her" is possessive only before a nominal.
    if (lex::Lower(toks[i].text) == "her") {
      bool nominal_next =
          i + 1 < toks.size() &&
          (toks[i + 1].pos.rfind("NN", 0) == 0 || toks[i + 1].pos == "JJ" ||
           toks[i + 1].pos == "CD");
      toks[i].pos = nominal_next ? "PRP$" : "PRP";
    }
  }
}

// ---------------------------------------------------------------------------
// Lemmatization.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string StripEd(const std::string& w) {
  if (lex::EndsWith(w, "ied") && w.size() > 4)
    return w.substr(0, w.size() - 3) + "y";
  if (lex::EndsWith(w, "ed") && w.size() > 3) {
    std::string stem = w.substr(0, w.size() - 2);
    // Undouble a doubled final consonant (stopped -> stop).
    size_t n = stem.size();
    if (n >= 3 && stem[n - 1] == stem[n - 2] &&
        !strchr("aeiou", stem[n - 1]) && strchr("aeiou", stem[n - 3]))
      stem.pop_back();
    return stem;
  }
  return w;
}

inline std::string StripPluralS(const std::string& w) {
  if (lex::EndsWith(w, "ies") && w.size() > 4)
    return w.substr(0, w.size() - 3) + "y";
  if (lex::EndsWith(w, "xes") || lex::EndsWith(w, "ches") ||
      lex::EndsWith(w, "shes") || lex::EndsWith(w, "sses") ||
      lex::EndsWith(w, "zes"))
    return w.substr(0, w.size() - 2);
  if (lex::EndsWith(w, "s") && !lex::EndsWith(w, "ss") && w.size() > 2)
    return w.substr(0, w.size() - 1);
  return w;
}

inline std::string StripIng(const std::string& w) {
  if (lex::EndsWith(w, "ing") && w.size() > 5) {
    std::string stem = w.substr(0, w.size() - 3);
    size_t n = stem.size();
    if (n >= 3 && stem[n - 1] == stem[n - 2] && !strchr("aeiou", stem[n - 1]))
      stem.pop_back();
    return stem;
  }
  return w;
}

}  // namespace detail

// POS-keyed inflectional suffix stripping with an irregular-form lexicon.
// Lemmas are lowercased.
inline void Lemmatize(Document* doc) {
  for (auto& t : doc->tokens) {
    std::string lower = lex::Lower(t.text);
    auto irr = lex::IrregularLemmas().find(lower);
    if (irr != lex::IrregularLemmas().end()) {
      t.lemma = irr->second;
      continue;
    }
    const std::string& pos = t.pos;
    if (pos == "NNS" || pos == "NNPS" || pos == "VBZ")
      t.lemma = detail::StripPluralS(lower);
    else if (pos == "VBD" || pos == "VBN")
      t.lemma = detail::StripEd(lower);
    else if (pos == "VBG")
      t.lemma = detail::StripIng(lower);
    else
      t.lemma = lower;
  }
}

// ---------------------------------------------------------------------------
// BIO chunking.
// ---------------------------------------------------------------------------

namespace detail {

inline bool InSet(const std::string& pos,
                  std::initializer_list<const char*> set) {
  for (const char* s : set)
    if (pos == s) return true;
  return false;
}

inline bool IsNounTag(const std::string& pos) {
  return InSet(pos, {"NN", "NNS", "NNP", "NNPS", "POS"});
}
inline bool IsVerbTag(const std::string& pos) {
  return InSet(pos, {"VB", "VBD", "VBZ", "VBP", "VBN", "VBG"});
}
inline bool IsNpPremod(const std::string& pos) {
  return InSet(pos, {"JJ", "JJR", "JJS", "RBS", "CD"});
}

// Tries an NP starting at i; returns one past the end, or i on failure.
inline size_t MatchNp(const std::vector<Token>& toks, size_t i, size_t end) {
  if (i >= end) return i;
  if (InSet(toks[i].pos, {"PRP", "WP", "WDT", "EX"})) return i + 1;
  size_t j = i;
  if (toks[j].pos == "DT" || toks[j].pos == "PRP$") ++j;
  while (j < end && IsNpPremod(toks[j].pos)) ++j;
  size_t nouns = j;
  while (j < end && IsNounTag(toks[j].pos)) ++j;
  return j > nouns ? j : i;
}

// Verb group: (MD|TO|RB)* V+ ((TO|RB)* V+)*
inline size_t MatchVp(const std::vector<Token>& toks, size_t i, size_t end) {
  size_t j = i;
  while (j < end && InSet(toks[j].pos, {"MD", "TO", "RB"})) ++j;
  size_t verbs = j;
  while (j < end && IsVerbTag(toks[j].pos)) ++j;
  if (j == verbs) return i;
  for (;;) {
    size_t k = j;
    while (k < end && InSet(toks[k].pos, {"TO", "RB"})) ++k;
    size_t v = k;
    while (k < end && IsVerbTag(toks[k].pos)) ++k;
    if (k == v) break;
    j = k;
  }
  return j;
}

}  // namespace detail

// Greedy left-to-right shallow chunker over POS tags.
inline void Chunk(Document* doc) {
  for (const auto& s : doc->sentences) {
    size_t i = s.first;
    const size_t end = s.last + 1;
    auto& toks = doc->tokens;
    while (i < end) {
      size_t j;
      if ((j = detail::MatchNp(toks, i, end)) > i) {
        toks[i].chunk = "B-NP";
        for (size_t k = i + 1; k < j; ++k) toks[k].chunk = "I-NP";
      } else if ((j = detail::MatchVp(toks, i, end)) > i) {
        toks[i].chunk = "B-VP";
        for (size_t k = i + 1; k < j; ++k) toks[k].chunk = "I-VP";
      } else if (toks[i].pos == "IN") {
        toks[i].chunk = "B-PP";
        j = i + 1;
      } else if (detail::InSet(toks[i].pos, {"RB", "RBR", "RBS", "WRB"})) {
        toks[i].chunk = "B-ADVP";
        j = i + 1;
      } else if (detail::InSet(toks[i].pos, {"JJ", "JJR", "JJS"})) {
        toks[i].chunk = "B-ADJP";
        j = i + 1;
      } else {
        toks[i].chunk = "O";
        j = i + 1;
      }
      i = j;
    }
  }
}

// ---------------------------------------------------------------------------
// Gazetteer NER.
// ---------------------------------------------------------------------------

namespace detail {

// "SingleAnimal" -> {"single", "animal"}
inline std::vector<std::string> CamelSplit(const std::string& name) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : name) {
    if (std::isupper(static_cast<unsigned char>(c)) && !cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
    cur += std::tolower(static_cast<unsigned char>(c));
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

}  // namespace detail

// Annotates numeric and temporal expressions plus tokens whose lemmas match
// a lexicalized ontology concept. Entity annotations carry the concept name
// and whether the concept is character-like (not an inanimate object).
inline void NerGazetteer(Document* doc, const ontology::KnowledgeBase& kb) {
  // Concept lexicalizations, keyed by their word sequence.
  std::map<std::vector<std::string>, std::string> gazetteer;
  size_t max_len = 1;
  for (const auto& c : kb.concepts) {
    auto words = detail::CamelSplit(c);
    max_len = std::max(max_len, words.size());
    gazetteer.emplace(std::move(words), c);
  }
  ontology::SubsumptionHierarchy hierarchy(kb);
  auto character_like = [&](const std::string& c) {
    if (c == "Object" || c == "Gender") return false;
    return !hierarchy.Subsumes("Object", c);
  };

  auto add = [&](Annotation a) {
    if (!doc->HasAnnotation(a)) doc->annotations.push_back(std::move(a));
  };

  const auto& toks = doc->tokens;
  for (const auto& s : doc->sentences) {
    size_t i = s.first;
    while (i <= s.last) {
      // Longest gazetteer match on lemmas.
      size_t matched = 0;
      std::string matched_concept;
      for (size_t len = std::min(max_len, s.last - i + 1); len >= 1; --len) {
        std::vector<std::string> seq;
        for (size_t k = 0; k < len; ++k)
          seq.push_back(toks[i + k].lemma.empty()
                            ? lex::Lower(toks[i + k].text)
                            : toks[i + k].lemma);
        auto it = gazetteer.find(seq);
        if (it != gazetteer.end()) {
          matched = len;
          matched_concept = it->second;
          break;
        }
      }
      if (matched > 0) {
        Annotation a;
        a.kind = "Entity";
        a.first = i;
        a.last = i + matched - 1;
        a.attrs["concept"] = matched_concept;
        a.attrs["cat"] = character_like(matched_concept) ? "character"
                                                         : "other";
        add(std::move(a));
        i += matched;
        continue;
      }
      if (toks[i].pos == "CD") {
        add({"Number", i, i, {}});
      } else if (lex::TemporalWords().count(
                     toks[i].lemma.empty() ? lex::Lower(toks[i].text)
                                           : toks[i].lemma)) {
        add({"Temporal", i, i, {}});
      }
      ++i;
    }
  }
}

// ---------------------------------------------------------------------------
// Convenience driver and dump format.
// ---------------------------------------------------------------------------

inline Document Annotate(const std::string& id, const std::string& text) {
  Document doc;
  doc.id = id;
  doc.text = text;
  doc.tokens = Tokenize(text);
  doc.sentences = SplitSentences(doc.tokens);
  PosTag(&doc);
  Lemmatize(&doc);
  Chunk(&doc);
  return doc;
}

// One token per line: index, text, start, end, pos, lemma, chunk. Blank
// line between sentences.
inline std::string DumpAnnotated(const Document& doc) {
  std::ostringstream out;
  for (const auto& s : doc.sentences) {
    for (size_t i = s.first; i <= s.last; ++i) {
      const Token& t = doc.tokens[i];
      out << i << "\t" << t.text << "\t" << t.begin << "\t" << t.end << "\t"
          << t.pos << "\t" << t.lemma << "\t" << t.chunk << "\n";
    }
    out << "\n";
  }
  return out.str();
}

inline std::string PosString(const Document& doc, const Sentence& s) {
  std::string out;
  for (size_t i = s.first; i <= s.last; ++i) {
    if (!out.empty()) out += " ";
    out += doc.tokens[i].pos;
  }
  return out;
}

inline std::string ChunkString(const Document& doc, const Sentence& s) {
  std::string out;
  for (size_t i = s.first; i <= s.last; ++i) {
    if (!out.empty()) out += " ";
    out += doc.tokens[i].chunk;
  }
  return out;
}

}  // namespace textpipe
}  // namespace folktale

#endif  // FOLKTALE_TEXTPIPE_HPP_
