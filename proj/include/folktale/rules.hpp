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

#ifndef FOLKTALE_RULES_HPP_
#define FOLKTALE_RULES_HPP_

// Pattern-matching rules over annotated documents. A rule matches a token
// sequence within one sentence and creates a new stand-off annotation.
//
// Rule file syntax (one rule per paragraph, # starts a comment):
//
//   rule DefiniteNP
//   match {text=the|The,chunk=B-NP} {chunk=I-NP}*
//   create DefiniteNP
//
// Element constraints: text, lemma, pos, chunk match token fields; in=Kind
// requires the token to lie inside an annotation of that kind; Kind.attr=v
// additionally constrains that annotation's attribute. Values may list
// alternatives separated by |. Quantifiers ? + * follow an element.
//
// The create line names the annotation kind, then optional attr=value
// pairs. attr=@name copies attribute `name` from an annotation overlapping
// the match. span=head restricts the new annotation to the head token.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "folktale/textpipe.hpp"

namespace folktale {
namespace rules {

using textpipe::Annotation;
using textpipe::Document;

class RuleError : public std::runtime_error {
 public:
  RuleError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct PatternElement {
  enum class Quantifier { kOne, kOptional, kPlus, kStar };
  // Constraint key to allowed values.
  std::map<std::string, std::vector<std::string>> constraints;
  Quantifier quantifier = Quantifier::kOne;
};

struct Rule {
  std::string name;
  std::vector<PatternElement> pattern;
  std::string create_kind;
  bool head_span = false;
  // Attribute values starting with '@' copy from a covering annotation.
  std::map<std::string, std::string> attrs;
};

namespace detail {

inline std::vector<std::string> SplitAlternatives(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == '|') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline PatternElement ParseElement(const std::string& body,
                                   const std::string& rule, int line) {
  PatternElement elem;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    auto eq = cur.find('=');
    if (eq == std::string::npos || eq == 0)
      throw RuleError("rule " + rule + ": malformed constraint '" + cur + "'",
                      line);
    std::string key = cur.substr(0, eq);
    bool known = key == "text" || key == "lemma" || key == "pos" ||
                 key == "chunk" || key == "in" ||
                 key.find('.') != std::string::npos;
    if (!known)
      throw RuleError("rule " + rule + ": unknown constraint key '" + key + "'",
                      line);
    elem.constraints[key] = SplitAlternatives(cur.substr(eq + 1));
    cur.clear();
  };
  for (char c : body) {
    if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  if (elem.constraints.empty())
    throw RuleError("rule " + rule + ": empty pattern element", line);
  return elem;
}

inline std::vector<PatternElement> ParsePattern(const std::string& src,
                                                const std::string& rule,
                                                int line) {
  std::vector<PatternElement> pattern;
  size_t i = 0;
  while (i < src.size()) {
    if (std::isspace(static_cast<unsigned char>(src[i]))) {
      ++i;
      continue;
    }
    if (src[i] != '{')
      throw RuleError("rule " + rule + ": expected '{' in pattern", line);
    size_t close = src.find('}', i);
    if (close == std::string::npos)
      throw RuleError("rule " + rule + ": unterminated pattern element", line);
    PatternElement elem =
        ParseElement(src.substr(i + 1, close - i - 1), rule, line);
    i = close + 1;
    if (i < src.size()) {
      if (src[i] == '?') elem.quantifier = PatternElement::Quantifier::kOptional, ++i;
      else if (src[i] == '+') elem.quantifier = PatternElement::Quantifier::kPlus, ++i;
      else if (src[i] == '*') elem.quantifier = PatternElement::Quantifier::kStar, ++i;
      else if (!std::isspace(static_cast<unsigned char>(src[i])) && src[i] != '{')
        throw RuleError("rule " + rule + ": bad quantifier '" +
                            std::string(1, src[i]) + "'",
                        line);
    }
    pattern.push_back(std::move(elem));
  }
  if (pattern.empty())
    throw RuleError("rule " + rule + ": empty pattern", line);
  return pattern;
}

}  // namespace detail

inline std::vector<Rule> CompileRules(const std::string& source) {
  std::vector<Rule> rules;
  std::istringstream in(source);
  std::string line;
  int lineno = 0;
  Rule cur;
  bool open = false, has_match = false;
  auto finish = [&](int at) {
    if (!open) return;
    if (!has_match)
      throw RuleError("rule " + cur.name + ": missing match line", at);
    if (cur.create_kind.empty())
      throw RuleError("rule " + cur.name + ": missing create line", at);
    rules.push_back(cur);
    cur = Rule();
    open = false;
    has_match = false;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword)) continue;
    if (keyword == "rule") {
      finish(lineno);
      if (!(ls >> cur.name))
        throw RuleError("rule without a name", lineno);
      open = true;
    } else if (keyword == "match") {
      if (!open) throw RuleError("match outside a rule", lineno);
      std::string rest;
      std::getline(ls, rest);
      cur.pattern = detail::ParsePattern(rest, cur.name, lineno);
      has_match = true;
    } else if (keyword == "create") {
      if (!open) throw RuleError("create outside a rule", lineno);
      if (!(ls >> cur.create_kind))
        throw RuleError("rule " + cur.name + ": create without a kind", lineno);
      std::string pair;
      while (ls >> pair) {
        auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0)
          throw RuleError("rule " + cur.name + ": malformed attribute '" +
                              pair + "'",
                          lineno);
        std::string key = pair.substr(0, eq), value = pair.substr(eq + 1);
        if (key == "span") {
          if (value != "head" && value != "full")
            throw RuleError("rule " + cur.name + ": span must be head or full",
                            lineno);
          cur.head_span = value == "head";
        } else {
          cur.attrs[key] = value;
        }
      }
    } else {
      throw RuleError("unknown keyword '" + keyword + "'", lineno);
    }
  }
  finish(lineno);
  return rules;
}

namespace detail {

inline bool ValueMatches(const std::vector<std::string>& allowed,
                         const std::string& v) {
  for (const auto& a : allowed)
    if (a == v) return true;
  return false;
}

inline bool ElementMatches(const Document& doc, const PatternElement& elem,
                           size_t i) {
  const auto& tok = doc.tokens[i];
  for (const auto& [key, allowed] : elem.constraints) {
    if (key == "text") {
      if (!ValueMatches(allowed, tok.text)) return false;
    } else if (key == "lemma") {
      if (!ValueMatches(allowed, tok.lemma)) return false;
    } else if (key == "pos") {
      if (!ValueMatches(allowed, tok.pos)) return false;
    } else if (key == "chunk") {
      if (!ValueMatches(allowed, tok.chunk)) return false;
    } else if (key == "in") {
      bool inside = false;
      for (const auto& a : doc.annotations)
        if (ValueMatches(allowed, a.kind) && i >= a.first && i <= a.last)
          inside = true;
      if (!inside) return false;
    } else {  // Kind.attr
      auto dot = key.find('.');
      std::string kind = key.substr(0, dot), attr = key.substr(dot + 1);
      bool ok = false;
      for (const auto& a : doc.annotations) {
        if (a.kind != kind || i < a.first || i > a.last) continue;
        auto it = a.attrs.find(attr);
        if (it != a.attrs.end() && ValueMatches(allowed, it->second)) ok = true;
      }
      if (!ok) return false;
    }
  }
  return true;
}

// Greedy match with backtracking; returns one past the last matched token,
// or npos on failure.
inline size_t MatchPattern(const Document& doc,
                           const std::vector<PatternElement>& pattern,
                           size_t ei, size_t i, size_t end) {
  if (ei == pattern.size()) return i;
  const auto& elem = pattern[ei];
  using Q = PatternElement::Quantifier;
  size_t min_reps = (elem.quantifier == Q::kOne || elem.quantifier == Q::kPlus)
                        ? 1
                        : 0;
  size_t max_reps =
      (elem.quantifier == Q::kOne || elem.quantifier == Q::kOptional)
          ? 1
          : end - i;
  size_t reps = 0;
  while (reps < max_reps && i + reps < end &&
         ElementMatches(doc, elem, i + reps))
    ++reps;
  for (size_t k = reps + 1; k-- > min_reps;) {
    size_t r = MatchPattern(doc, pattern, ei + 1, i + k, end);
    if (r != std::string::npos) return r;
  }
  return std::string::npos;
}

inline size_t HeadToken(const Document& doc, size_t first, size_t last) {
  for (size_t i = last + 1; i-- > first;) {
    const std::string& pos = doc.tokens[i].pos;
    if (pos.rfind("NN", 0) == 0 || pos == "PRP") return i;
  }
  return last;
}

}  // namespace detail

// Applies each rule in order, scanning sentences left to right and taking
// greedy non-overlapping matches. Re-application adds nothing.
inline void ApplyRules(Document* doc, const std::vector<Rule>& rules) {
  for (const auto& rule : rules) {
    std::vector<Annotation> found;
    for (const auto& s : doc->sentences) {
      size_t i = s.first;
      const size_t end = s.last + 1;
      while (i < end) {
        size_t r = detail::MatchPattern(*doc, rule.pattern, 0, i, end);
        if (r == std::string::npos || r == i) {
          ++i;
          continue;
        }
        Annotation a;
        a.kind = rule.create_kind;
        a.first = i;
        a.last = r - 1;
        if (rule.head_span) {
          a.first = a.last = detail::HeadToken(*doc, a.first, a.last);
        }
        for (const auto& [key, value] : rule.attrs) {
          if (!value.empty() && value[0] == '@') {
            std::string src = value.substr(1);
            for (const auto& other : doc->annotations) {
              if (other.last < i || other.first > r - 1) continue;
              auto it = other.attrs.find(src);
              if (it != other.attrs.end()) {
                a.attrs[key] = it->second;
                break;
              }
            }
          } else {
            a.attrs[key] = value;
          }
        }
        found.push_back(std::move(a));
        i = r;
      }
    }
    for (auto& a : found)
      if (!doc->HasAnnotation(a)) doc->annotations.push_back(std::move(a));
  }
}

inline std::vector<Rule> CompileRulesFile(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw RuleError("cannot open rules file " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return CompileRules(ss.str());
}

}  // namespace rules
}  // namespace folktale

#endif  // FOLKTALE_RULES_HPP_
