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

#ifndef FOLKTALE_NARRATIVE_HPP_
#define FOLKTALE_NARRATIVE_HPP_

// Character extraction and perspective reporting. Characters are found by
// the candidate rules, classified into the ontology, linked to their
// coreference chains, and then matched against sentences or triplets to
// build per-character perspectives.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "folktale/coref.hpp"
#include "folktale/ontology.hpp"
#include "folktale/openie.hpp"
#include "folktale/rules.hpp"
#include "folktale/textpipe.hpp"

namespace folktale {
namespace narrative {

using textpipe::Document;

inline constexpr const char* kNoPerspectiveMarker = "no perspective found";

struct CharacterRecord {
  std::string canonical_name;
  std::string individual_id;
  std::string source_doc;
  std::vector<std::pair<size_t, size_t>> mention_spans;  // token ranges
  std::set<std::string> concepts;  // realized atomic concepts
  std::set<std::string> aliases;   // surface strings naming the character
};

struct PerspectiveReport {
  std::string character;
  bool long_version = false;
  std::vector<std::string> items;
};

namespace detail {

// Candidate concept assertion is kept only if the ABox stays consistent.
inline bool CheckCast(const ontology::KnowledgeBase& kb,
                      const std::string& individual,
                      const std::string& concept_name) {
  ontology::KnowledgeBase probe = kb;
  probe.Assert(individual, ontology::ConceptExpr::Atomic(concept_name));
  return ontology::CheckConsistency(ontology::Saturate(probe)).consistent();
}

inline std::string LowerCopy(const std::string& s) {
  return textpipe::lex::Lower(s);
}

}  // namespace detail

// Character extraction loop: classify nominal phrases, select candidate
// characters, match relation triggers, populate the ABox (checking each
// assertion keeps it consistent), and link candidates to their chains and
// further literal mentions within the same document.
inline std::vector<CharacterRecord> ExtractCharacters(
    ontology::KnowledgeBase* kb, Document* doc,
    const std::vector<rules::Rule>& jn, const std::vector<rules::Rule>& jc,
    const std::vector<rules::Rule>& jr) {
  rules::ApplyRules(doc, jn);

  auto mentions = coref::DetectMentions(*doc);
  auto chains = coref::Resolve(*doc, mentions);

  // canonical key (lowercased) -> record under construction
  std::map<std::string, CharacterRecord> by_key;
  std::map<size_t, std::string> individual_of_head;  // head token -> id
  std::set<size_t> processed;  // candidate head tokens already handled

  for (;;) {
    rules::ApplyRules(doc, jc);
    std::vector<const textpipe::Annotation*> fresh;
    for (const auto& a : doc->annotations)
      if (a.kind == "CandidateCharacter" && !processed.count(a.first))
        fresh.push_back(&a);
    if (fresh.empty()) break;

    for (const auto* cand : fresh) {
      processed.insert(cand->first);
      size_t head = cand->first;

      // Canonical name and linked mentions come from the coref chain whose
      // member is headed by this token.
      std::string canonical = doc->tokens[head].text;
      std::vector<std::pair<size_t, size_t>> spans = {{head, head}};
      std::set<std::string> aliases;
      for (const auto& chain : chains) {
        bool member = false;
        for (size_t mi : chain.mentions)
          if (mentions[mi].head == head) member = true;
        if (!member) continue;
        canonical = doc->tokens[mentions[chain.representative].head].text;
        spans.clear();
        for (size_t mi : chain.mentions) {
          const auto& m = mentions[mi];
          spans.push_back({m.first, m.last});
          if (m.kind != coref::MentionKind::kPronoun)
            aliases.insert(doc->SpanText(m.first, m.last));
        }
        break;
      }
      aliases.insert(canonical);

      std::string key = detail::LowerCopy(canonical);
      std::string id = doc->id + ":" + key;
      auto [it, fresh_char] = by_key.emplace(key, CharacterRecord());
      CharacterRecord& rec = it->second;
      if (fresh_char) {
        rec.canonical_name = canonical;
        rec.individual_id = id;
        rec.source_doc = doc->id;
        kb->AddIndividual(id, canonical);
      }
      individual_of_head[head] = rec.individual_id;
      rec.mention_spans.insert(rec.mention_spans.end(), spans.begin(),
                               spans.end());
      rec.aliases.insert(aliases.begin(), aliases.end());

      auto concept_attr = cand->attrs.find("concept");
      if (concept_attr != cand->attrs.end() &&
          detail::CheckCast(*kb, rec.individual_id, concept_attr->second))
        kb->Assert(rec.individual_id,
                   ontology::ConceptExpr::Atomic(concept_attr->second));
    }

    // Relation triggers between the candidates found so far.
    rules::ApplyRules(doc, jr);
    for (const auto& a : doc->annotations) {
      if (a.kind != "Relation") continue;
      std::vector<std::string> parties;
      for (size_t t = a.first; t <= a.last; ++t) {
        auto it = individual_of_head.find(t);
        if (it != individual_of_head.end()) parties.push_back(it->second);
      }
      if (parties.size() != 2) continue;
      bool subject_last = a.attrs.count("arg") && a.attrs.at("arg") == "last";
      const std::string& subj = subject_last ? parties[1] : parties[0];
      const std::string& obj = subject_last ? parties[0] : parties[1];
      kb->AssertRole(a.attrs.at("rel"), subj, obj);
    }
  }

  // Additional literal mentions of each canonical name in this document.
  for (auto& [key, rec] : by_key) {
    std::sort(rec.mention_spans.begin(), rec.mention_spans.end());
    rec.mention_spans.erase(
        std::unique(rec.mention_spans.begin(), rec.mention_spans.end()),
        rec.mention_spans.end());
    for (size_t t = 0; t < doc->tokens.size(); ++t) {
      if (detail::LowerCopy(doc->tokens[t].text) != key) continue;
      bool covered = false;
      for (const auto& [f, l] : rec.mention_spans)
        if (t >= f && t <= l) covered = true;
      if (!covered) rec.mention_spans.push_back({t, t});
    }
    std::sort(rec.mention_spans.begin(), rec.mention_spans.end());
  }

  // Realize each character against the saturated knowledge base.
  auto saturated = ontology::Saturate(*kb);
  std::vector<CharacterRecord> out;
  for (auto& [key, rec] : by_key) {
    rec.concepts = ontology::Realize(saturated, rec.individual_id);
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(),
            [](const CharacterRecord& a, const CharacterRecord& b) {
              return a.mention_spans.front() < b.mention_spans.front();
            });
  return out;
}

namespace detail {

inline bool IsWordByte(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-';
}

// Case-insensitive token-boundary search, so "king" never matches inside
// "kingdom".
inline bool ContainsName(const std::string& text, const std::string& name) {
  if (name.empty()) return false;
  std::string haystack = LowerCopy(text), needle = LowerCopy(name);
  size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !IsWordByte(haystack[pos - 1]);
    size_t end = pos + needle.size();
    bool right_ok = end == haystack.size() || !IsWordByte(haystack[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

inline bool MatchesAnyAlias(const std::string& text,
                            const CharacterRecord& rec) {
  for (const auto& alias : rec.aliases)
    if (ContainsName(text, alias)) return true;
  return false;
}

}  // namespace detail

// Long version: the original sentence of every extraction record that
// mentions the character. Short version: every triplet whose arguments
// mention the character, rendered "arg1 rel arg2". Items keep document
// order and are deduplicated; an empty report is legitimate.
inline std::vector<PerspectiveReport> FindPerspective(
    const std::vector<CharacterRecord>& chars,
    const std::vector<openie::ExtractionRecord>& records, bool long_version) {
  std::vector<PerspectiveReport> reports;
  for (const auto& rec : chars) {
    PerspectiveReport report;
    report.character = rec.canonical_name;
    report.long_version = long_version;
    std::set<std::string> seen;
    for (const auto& r : records) {
      std::string item;
      if (long_version) {
        if (!detail::MatchesAnyAlias(r.original_sentence, rec)) continue;
        item = r.original_sentence;
      } else {
        if (!detail::MatchesAnyAlias(r.arg1, rec) &&
            !detail::MatchesAnyAlias(r.arg2, rec))
          continue;
        item = r.arg1 + " " + r.rel + " " + r.arg2;
      }
      if (seen.insert(item).second) report.items.push_back(std::move(item));
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

// One line per character: name, realized concepts, mention count, doc id.
inline std::string RenderCharacters(const std::vector<CharacterRecord>& chars) {
  std::ostringstream out;
  for (const auto& c : chars) {
    out << c.canonical_name << "\t";
    bool first = true;
    for (const auto& concept_name : c.concepts) {
      if (!first) out << ",";
      out << concept_name;
      first = false;
    }
    out << "\t" << c.mention_spans.size() << "\t" << c.source_doc << "\n";
  }
  return out.str();
}

// Header line "character/version", then one item per line; a report with
// no items carries the explicit marker instead.
inline std::string RenderPerspective(const PerspectiveReport& report) {
  std::ostringstream out;
  out << report.character << "/" << (report.long_version ? "long" : "short")
      << "\n";
  if (report.items.empty()) {
    out << kNoPerspectiveMarker << "\n";
  } else {
    for (const auto& item : report.items) out << item << "\n";
  }
  return out.str();
}

}  // namespace narrative
}  // namespace folktale

#endif  // FOLKTALE_NARRATIVE_HPP_
