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

#ifndef FOLKTALE_COREF_HPP_
#define FOLKTALE_COREF_HPP_

// Rule-based coreference resolution: mention detection over chunks, a
// deterministic resolution sieve, representative selection, and rewriting
// of the text with each chain's representative.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "folktale/textpipe.hpp"

namespace folktale {
namespace coref {

using textpipe::Document;

enum class Gender { kMale, kFemale, kNeuter, kUnknown };
enum class Number { kSingular, kPlural, kUnknown };
enum class MentionKind { kPronoun, kNominal, kProper };

struct Mention {
  size_t first = 0;  // token range, inclusive
  size_t last = 0;
  size_t head = 0;
  size_t sentence = 0;
  MentionKind kind = MentionKind::kNominal;
  Gender gender = Gender::kUnknown;
  Number number = Number::kUnknown;
  std::string head_lemma;
};

// Mention indices in document order; the representative is a member.
struct CoreferenceChain {
  std::vector<size_t> mentions;
  size_t representative = 0;
};

struct Replacement {
  size_t mention = 0;  // index into the mention list
  size_t chain = 0;
  size_t begin = 0;  // byte range in the rewritten text
  size_t end = 0;
};

struct DecoreferencedDocument {
  std::string text;
  std::vector<Replacement> replacements;
};

namespace lex {

struct PronounInfo {
  Gender gender;
  Number number;
  // first/second person pronouns and relatives get special treatment.
  enum class Class { kThird, kFirst, kSecond, kRelative } cls;
};

inline const std::map<std::string, PronounInfo>& Pronouns() {
  using C = PronounInfo::Class;
  static const std::map<std::string, PronounInfo> kTable = {
      {"he", {Gender::kMale, Number::kSingular, C::kThird}},
      {"him", {Gender::kMale, Number::kSingular, C::kThird}},
      {"his", {Gender::kMale, Number::kSingular, C::kThird}},
      {"himself", {Gender::kMale, Number::kSingular, C::kThird}},
      {"she", {Gender::kFemale, Number::kSingular, C::kThird}},
      {"her", {Gender::kFemale, Number::kSingular, C::kThird}},
      {"herself", {Gender::kFemale, Number::kSingular, C::kThird}},
      {"it", {Gender::kNeuter, Number::kSingular, C::kThird}},
      {"its", {Gender::kNeuter, Number::kSingular, C::kThird}},
      {"itself", {Gender::kNeuter, Number::kSingular, C::kThird}},
      {"they", {Gender::kUnknown, Number::kPlural, C::kThird}},
      {"them", {Gender::kUnknown, Number::kPlural, C::kThird}},
      {"their", {Gender::kUnknown, Number::kPlural, C::kThird}},
      {"themselves", {Gender::kUnknown, Number::kPlural, C::kThird}},
      {"i", {Gender::kUnknown, Number::kSingular, C::kFirst}},
      {"me", {Gender::kUnknown, Number::kSingular, C::kFirst}},
      {"my", {Gender::kUnknown, Number::kSingular, C::kFirst}},
      {"myself", {Gender::kUnknown, Number::kSingular, C::kFirst}},
      {"mine", {Gender::kUnknown, Number::kSingular, C::kFirst}},
      {"we", {Gender::kUnknown, Number::kPlural, C::kFirst}},
      {"us", {Gender::kUnknown, Number::kPlural, C::kFirst}},
      {"our", {Gender::kUnknown, Number::kPlural, C::kFirst}},
      {"you", {Gender::kUnknown, Number::kUnknown, C::kSecond}},
      {"your", {Gender::kUnknown, Number::kUnknown, C::kSecond}},
      {"yourself", {Gender::kUnknown, Number::kUnknown, C::kSecond}},
      {"who", {Gender::kUnknown, Number::kUnknown, C::kRelative}},
      {"whom", {Gender::kUnknown, Number::kUnknown, C::kRelative}},
      {"which", {Gender::kUnknown, Number::kUnknown, C::kRelative}},
  };
  return kTable;
}

inline Gender NounGender(const std::string& lemma) {
  static const std::set<std::string> kMale = {
      "king",   "father",  "man",     "husband", "boy",    "son",
      "brother", "prince", "master",  "servant", "goldsmith",
      "helmsman", "groom", "fiance",  "lord",    "huntsman"};
  static const std::set<std::string> kFemale = {
      "queen",  "mother", "woman",   "wife",     "girl",   "daughter",
      "sister", "princess", "maiden", "witch",   "enchantress", "bride",
      "maid",   "waiting-maid", "fiancee", "stepmother"};
  if (kMale.count(lemma)) return Gender::kMale;
  if (kFemale.count(lemma)) return Gender::kFemale;
  return Gender::kUnknown;
}

inline Gender NameGender(const std::string& lower) {
  static const std::set<std::string> kMale = {"henry", "john", "hans",
                                              "roland", "peter"};
  static const std::set<std::string> kFemale = {"rapunzel", "gretel",
                                                "grethel", "snow-white"};
  if (kMale.count(lower)) return Gender::kMale;
  if (kFemale.count(lower)) return Gender::kFemale;
  return Gender::kUnknown;
}

}  // namespace lex

namespace detail {

inline bool GenderCompatible(Gender a, Gender b) {
  return a == Gender::kUnknown || b == Gender::kUnknown || a == b;
}
inline bool NumberCompatible(Number a, Number b) {
  return a == Number::kUnknown || b == Number::kUnknown || a == b;
}

inline size_t HeadOf(const Document& doc, size_t first, size_t last) {
  for (size_t i = last + 1; i-- > first;) {
    const std::string& pos = doc.tokens[i].pos;
    if (pos.rfind("NN", 0) == 0) return i;
  }
  return last;
}

inline Mention MakeNominal(const Document& doc, size_t first, size_t last,
                           size_t sentence) {
  Mention m;
  m.first = first;
  m.last = last;
  m.sentence = sentence;
  m.head = HeadOf(doc, first, last);
  m.head_lemma = doc.tokens[m.head].lemma;
  m.kind = MentionKind::kNominal;
  for (size_t i = first; i <= last; ++i)
    if (doc.tokens[i].pos == "NNP" || doc.tokens[i].pos == "NNPS")
      m.kind = MentionKind::kProper;
  const std::string& hpos = doc.tokens[m.head].pos;
  m.number = (hpos == "NNS" || hpos == "NNPS") ? Number::kPlural
                                               : Number::kSingular;
  m.gender = m.kind == MentionKind::kProper
                 ? lex::NameGender(textpipe::lex::Lower(doc.tokens[m.head].text))
                 : lex::NounGender(m.head_lemma);
  return m;
}

inline Mention MakePronoun(const Document& doc, size_t i, size_t sentence) {
  Mention m;
  m.first = m.last = m.head = i;
  m.sentence = sentence;
  m.kind = MentionKind::kPronoun;
  m.head_lemma = textpipe::lex::Lower(doc.tokens[i].text);
  auto it = lex::Pronouns().find(m.head_lemma);
  if (it != lex::Pronouns().end()) {
    m.gender = it->second.gender;
    m.number = it->second.number;
  }
  return m;
}

}  // namespace detail

// Pronouns and NP chunks become mentions. A possessive pronoun opening an
// NP is split off as its own pronoun mention, with the remainder nominal.
inline std::vector<Mention> DetectMentions(const Document& doc) {
  std::vector<Mention> mentions;
  for (const auto& s : doc.sentences) {
    size_t i = s.first;
    while (i <= s.last) {
      if (doc.tokens[i].chunk != "B-NP") {
        ++i;
        continue;
      }
      size_t j = i;
      while (j + 1 <= s.last && doc.tokens[j + 1].chunk == "I-NP") ++j;
      const std::string& pos0 = doc.tokens[i].pos;
      if (i == j && (pos0 == "PRP" || pos0 == "WP" || pos0 == "WDT")) {
        if (lex::Pronouns().count(textpipe::lex::Lower(doc.tokens[i].text)))
          mentions.push_back(detail::MakePronoun(doc, i, s.index));
      } else if (pos0 == "PRP$") {
        mentions.push_back(detail::MakePronoun(doc, i, s.index));
        if (j > i)
          mentions.push_back(detail::MakeNominal(doc, i + 1, j, s.index));
      } else if (i != j || pos0 != "EX") {
        mentions.push_back(detail::MakeNominal(doc, i, j, s.index));
      }
      i = j + 1;
    }
  }
  return mentions;
}

namespace detail {

// Union-find that tracks each chain's aggregate gender and number and
// refuses merges that would make a chain inconsistent.
class ChainBuilder {
 public:
  explicit ChainBuilder(const std::vector<Mention>& mentions)
      : parent_(mentions.size()) {
    std::iota(parent_.begin(), parent_.end(), 0);
    for (const auto& m : mentions) {
      gender_.push_back(m.gender);
      number_.push_back(m.number);
    }
  }

  size_t Find(size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  bool Compatible(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    return GenderCompatible(gender_[a], gender_[b]) &&
           NumberCompatible(number_[a], number_[b]);
  }

  // Merges only when the aggregates agree; returns whether it happened.
  bool TryUnion(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return true;
    if (!GenderCompatible(gender_[a], gender_[b]) ||
        !NumberCompatible(number_[a], number_[b]))
      return false;
    // Smaller root wins so chains are anchored at their first mention.
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    if (gender_[a] == Gender::kUnknown) gender_[a] = gender_[b];
    if (number_[a] == Number::kUnknown) number_[a] = number_[b];
    return true;
  }

 private:
  std::vector<size_t> parent_;
  std::vector<Gender> gender_;
  std::vector<Number> number_;
};

inline std::string SurfaceLower(const Document& doc, const Mention& m) {
  return textpipe::lex::Lower(doc.SpanText(m.first, m.last));
}

// Nearest antecedent for a third-person pronoun: subject of the sentence
// first, then right-to-left over earlier mentions, current sentence before
// previous ones. Compatibility is judged against chain aggregates.
inline std::optional<size_t> FindAntecedent(
    const std::vector<Mention>& mentions, size_t p, ChainBuilder& chains) {
  const Mention& pron = mentions[p];
  for (size_t sent = pron.sentence + 1; sent-- > 0;) {
    // Subject preference: the sentence's first mention.
    for (size_t i = 0; i < mentions.size(); ++i) {
      const Mention& m = mentions[i];
      if (m.sentence != sent) continue;
      if (i != p && !(sent == pron.sentence && m.last >= pron.first) &&
          chains.Compatible(i, p))
        return i;
      break;  // only the first mention is the subject
    }
    for (size_t i = mentions.size(); i-- > 0;) {
      const Mention& m = mentions[i];
      if (m.sentence != sent || m.kind == MentionKind::kPronoun) continue;
      if (sent == pron.sentence && m.last >= pron.first) continue;
      if (chains.Compatible(i, p)) return i;
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline size_t FindRepresentative(const Document& doc,
                                 const std::vector<Mention>& mentions,
                                 const std::vector<size_t>& members);

// Deterministic resolution sieve:
//   1. exact surface match between non-pronoun mentions;
//   2. head-lemma match with gender/number agreement;
//   3. definite predicate nominative after a copula links to the clause
//      subject ("for she was the waiting-maid");
//   4. pronouns to the nearest agreeing antecedent, subject preferred;
//      first person goes to the nearest preceding proper mention, second
//      person stays unresolved.
// Only chains with two or more mentions are returned.
inline std::vector<CoreferenceChain> Resolve(
    const Document& doc, const std::vector<Mention>& mentions) {
  detail::ChainBuilder uf(mentions);

  // Pass 1: exact surface string.
  std::map<std::string, size_t> first_surface;
  for (size_t i = 0; i < mentions.size(); ++i) {
    if (mentions[i].kind == MentionKind::kPronoun) continue;
    std::string key = detail::SurfaceLower(doc, mentions[i]);
    auto [it, fresh] = first_surface.emplace(key, i);
    if (!fresh) uf.TryUnion(it->second, i);
  }

  // Pass 2: head lemma with agreement.
  std::map<std::string, size_t> first_head;
  for (size_t i = 0; i < mentions.size(); ++i) {
    const Mention& m = mentions[i];
    if (m.kind == MentionKind::kPronoun) continue;
    auto it = first_head.find(m.head_lemma);
    if (it == first_head.end())
      first_head[m.head_lemma] = i;
    else
      uf.TryUnion(it->second, i);
  }

  // Pass 3: copular predicate nominatives.
  for (const auto& s : doc.sentences) {
    for (size_t v = s.first; v <= s.last; ++v) {
      const auto& tok = doc.tokens[v];
      if (tok.lemma != "be" || tok.pos.rfind("VB", 0) != 0) continue;
      // The first definite mention after the copula, with nothing but
      // adverbs or determiners in between; "not" blocks the link.
      std::optional<size_t> pred;
      for (size_t i = 0; i < mentions.size(); ++i) {
        const Mention& m = mentions[i];
        if (m.sentence != s.index || m.first <= v) continue;
        if (m.kind == MentionKind::kPronoun) break;
        bool blocked = false;
        for (size_t t = v + 1; t < m.first; ++t)
          if (doc.tokens[t].lemma == "not" || doc.tokens[t].pos.rfind("VB", 0) == 0)
            blocked = true;
        if (!blocked && textpipe::lex::Lower(doc.tokens[m.first].text) == "the")
          pred = i;
        break;
      }
      if (!pred) continue;
      // Clause subject: nearest mention ending before the copula.
      std::optional<size_t> subj;
      for (size_t i = 0; i < mentions.size(); ++i)
        if (mentions[i].sentence == s.index && mentions[i].last < v) subj = i;
      if (subj) uf.TryUnion(*subj, *pred);
    }
  }

  // Pass 4: pronouns.
  for (size_t p = 0; p < mentions.size(); ++p) {
    const Mention& m = mentions[p];
    if (m.kind != MentionKind::kPronoun) continue;
    auto info = lex::Pronouns().at(m.head_lemma);
    using C = lex::PronounInfo::Class;
    if (info.cls == C::kSecond) continue;
    if (info.cls == C::kFirst) {
      // Speaker heuristic: the nearest preceding proper mention.
      for (size_t i = p; i-- > 0;) {
        if (mentions[i].kind == MentionKind::kProper) {
          uf.TryUnion(i, p);
          break;
        }
      }
      continue;
    }
    auto ante = detail::FindAntecedent(mentions, p, uf);
    if (ante) uf.TryUnion(*ante, p);
  }

  std::map<size_t, std::vector<size_t>> groups;
  for (size_t i = 0; i < mentions.size(); ++i)
    groups[uf.Find(i)].push_back(i);

  std::vector<CoreferenceChain> chains;
  for (auto& [root, members] : groups) {
    if (members.size() < 2) continue;
    CoreferenceChain chain;
    chain.mentions = members;  // already in document order
    chain.representative = FindRepresentative(doc, mentions, members);
    chains.push_back(std::move(chain));
  }
  return chains;
}

// First proper mention; else the longest nominal; else the first member.
inline size_t FindRepresentative(const Document& doc,
                                 const std::vector<Mention>& mentions,
                                 const std::vector<size_t>& members) {
  (void)doc;
  for (size_t i : members)
    if (mentions[i].kind == MentionKind::kProper) return i;
  std::optional<size_t> best;
  for (size_t i : members) {
    if (mentions[i].kind != MentionKind::kNominal) continue;
    if (!best || mentions[i].last - mentions[i].first >
                     mentions[*best].last - mentions[*best].first)
      best = i;
  }
  return best ? *best : members.front();
}

namespace detail {

inline std::string WithCase(std::string word, bool capitalize, bool lowercase) {
  if (word.empty()) return word;
  if (capitalize)
    word[0] = std::toupper(static_cast<unsigned char>(word[0]));
  else if (lowercase)
    word[0] = std::tolower(static_cast<unsigned char>(word[0]));
  return word;
}

}  // namespace detail

// Rewrites every non-representative mention with its chain representative's
// head text. Pronoun substitutions are lowercased unless sentence-initial.
inline DecoreferencedDocument Decoreference(
    const Document& doc, const std::vector<Mention>& mentions,
    const std::vector<CoreferenceChain>& chains) {
  struct Edit {
    size_t mention, chain;
  };
  std::map<size_t, Edit> by_start;  // mention first-token index
  for (size_t c = 0; c < chains.size(); ++c)
    for (size_t m : chains[c].mentions)
      if (m != chains[c].representative) by_start[mentions[m].first] = {m, c};

  DecoreferencedDocument out;
  size_t cursor = 0;
  for (const auto& [start, edit] : by_start) {
    const Mention& m = mentions[edit.mention];
    const Mention& rep = mentions[chains[edit.chain].representative];
    size_t begin = doc.tokens[m.first].begin;
    size_t end = doc.tokens[m.last].end;
    if (begin < cursor) continue;  // nested inside an earlier edit
    out.text.append(doc.text, cursor, begin - cursor);
    bool initial = m.first == doc.sentences[m.sentence].first;
    std::string word = detail::WithCase(
        doc.tokens[rep.head].text, initial,
        m.kind == MentionKind::kPronoun && !initial);
    size_t b = out.text.size();
    out.text += word;
    out.replacements.push_back({edit.mention, edit.chain, b, out.text.size()});
    cursor = end;
  }
  out.text.append(doc.text, cursor, doc.text.size() - cursor);
  return out;
}

// One chain per line: doc_id, representative span, member spans. Spans are
// sentence:first-last with token offsets relative to the sentence start.
inline std::string DumpChains(const Document& doc,
                              const std::vector<Mention>& mentions,
                              const std::vector<CoreferenceChain>& chains) {
  auto span = [&](const Mention& m) {
    size_t base = doc.sentences[m.sentence].first;
    std::ostringstream ss;
    ss << m.sentence << ":" << m.first - base << "-" << m.last - base;
    return ss.str();
  };
  std::ostringstream out;
  for (const auto& c : chains) {
    out << doc.id << "\t" << span(mentions[c.representative]) << "\t";
    for (size_t i = 0; i < c.mentions.size(); ++i) {
      if (i) out << ",";
      out << span(mentions[c.mentions[i]]);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace coref
}  // namespace folktale

#endif  // FOLKTALE_COREF_HPP_
