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

#ifndef FOLKTALE_ONTOLOGY_HPP_
#define FOLKTALE_ONTOLOGY_HPP_

// Knowledge base for the folktale domain: a TBox of concept axioms and role
// declarations plus an ABox of individuals. Reasoning is saturation based:
// role and concept consequences are materialized to a fixpoint, which is
// sound and, for the axiom shapes used by the bundled ontology, complete.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace folktale {
namespace ontology {

class OntologyError : public std::runtime_error {
 public:
  explicit OntologyError(const std::string& msg) : std::runtime_error(msg) {}
};

class SyntaxError : public OntologyError {
 public:
  SyntaxError(int line, const std::string& msg)
      : OntologyError("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Concept expression: atomic name, Top/Bottom, conjunction, disjunction, or
// an existential role restriction.
struct ConceptExpr {
  enum class Kind { kAtomic, kTop, kBottom, kAnd, kOr, kSome };

  Kind kind = Kind::kTop;
  std::string name;               // kAtomic
  std::string role;               // kSome
  std::vector<ConceptExpr> args;  // kAnd/kOr operands; kSome filler in args[0]

  static ConceptExpr Atomic(std::string n) {
    ConceptExpr e;
    e.kind = Kind::kAtomic;
    e.name = std::move(n);
    return e;
  }
  static ConceptExpr Top() { return ConceptExpr(); }
  static ConceptExpr Bottom() {
    ConceptExpr e;
    e.kind = Kind::kBottom;
    return e;
  }
  static ConceptExpr And(std::vector<ConceptExpr> ops) {
    ConceptExpr e;
    e.kind = Kind::kAnd;
    e.args = std::move(ops);
    return e;
  }
  static ConceptExpr Or(std::vector<ConceptExpr> ops) {
    ConceptExpr e;
    e.kind = Kind::kOr;
    e.args = std::move(ops);
    return e;
  }
  static ConceptExpr Some(std::string role, ConceptExpr filler) {
    ConceptExpr e;
    e.kind = Kind::kSome;
    e.role = std::move(role);
    e.args.push_back(std::move(filler));
    return e;
  }

  bool operator==(const ConceptExpr& o) const {
    return kind == o.kind && name == o.name && role == o.role && args == o.args;
  }
};

struct RoleDecl {
  std::string name;
  std::set<std::string> parent_roles;
  std::optional<std::string> inverse_of;
  bool transitive = false;
  bool symmetric = false;
  std::optional<ConceptExpr> domain;
  std::optional<ConceptExpr> range;
  // Max-cardinality restriction: at most `first` distinct fillers of `second`.
  std::optional<std::pair<int, ConceptExpr>> max_cardinality;

  bool operator==(const RoleDecl& o) const {
    return name == o.name && parent_roles == o.parent_roles &&
           inverse_of == o.inverse_of && transitive == o.transitive &&
           symmetric == o.symmetric && domain == o.domain &&
           range == o.range && max_cardinality == o.max_cardinality;
  }
};

struct Axiom {
  enum class Type { kSubsumption, kEquivalence, kDisjointness };
  Type type = Type::kSubsumption;
  ConceptExpr lhs;
  ConceptExpr rhs;

  bool operator==(const Axiom& o) const {
    return type == o.type && lhs == o.lhs && rhs == o.rhs;
  }
};

struct Individual {
  std::string id;
  std::string label;
  bool operator==(const Individual& o) const {
    return id == o.id && label == o.label;
  }
};

struct ConceptAssertion {
  std::string individual;
  ConceptExpr expr;
  bool operator==(const ConceptAssertion& o) const {
    return individual == o.individual && expr == o.expr;
  }
  bool operator<(const ConceptAssertion& o) const {
    if (individual != o.individual) return individual < o.individual;
    std::ostringstream a, b;
    a << ExprKey(expr);
    b << ExprKey(o.expr);
    return a.str() < b.str();
  }
  static std::string ExprKey(const ConceptExpr& e);
};

struct RoleAssertion {
  std::string role;
  std::string subject;
  std::string object;
  bool operator==(const RoleAssertion& o) const {
    return role == o.role && subject == o.subject && object == o.object;
  }
  bool operator<(const RoleAssertion& o) const {
    return std::tie(role, subject, object) <
           std::tie(o.role, o.subject, o.object);
  }
};

struct KnowledgeBase {
  std::set<std::string> concepts;
  std::map<std::string, RoleDecl> roles;
  std::vector<Axiom> axioms;

  std::map<std::string, Individual> individuals;
  std::vector<ConceptAssertion> concept_assertions;
  std::set<RoleAssertion> role_assertions;

  bool operator==(const KnowledgeBase& o) const {
    return concepts == o.concepts && roles == o.roles && axioms == o.axioms &&
           individuals == o.individuals &&
           concept_assertions == o.concept_assertions &&
           role_assertions == o.role_assertions;
  }

  bool HasConcept(const std::string& name) const {
    return concepts.count(name) > 0;
  }
  bool HasRole(const std::string& name) const { return roles.count(name) > 0; }

  void AddIndividual(const std::string& id, const std::string& label) {
    individuals.emplace(id, Individual{id, label});
  }

  void Assert(const std::string& individual, const ConceptExpr& expr) {
    CheckDeclared(expr);
    if (!individuals.count(individual))
      AddIndividual(individual, individual);
    ConceptAssertion a{individual, expr};
    if (std::find(concept_assertions.begin(), concept_assertions.end(), a) ==
        concept_assertions.end())
      concept_assertions.push_back(a);
  }

  void AssertRole(const std::string& role, const std::string& subject,
                  const std::string& object) {
    if (!HasRole(role)) throw OntologyError("undeclared role: " + role);
    if (!individuals.count(subject)) AddIndividual(subject, subject);
    if (!individuals.count(object)) AddIndividual(object, object);
    role_assertions.insert(RoleAssertion{role, subject, object});
  }

  void CheckDeclared(const ConceptExpr& e) const {
    switch (e.kind) {
      case ConceptExpr::Kind::kAtomic:
        if (!HasConcept(e.name))
          throw OntologyError("undeclared concept: " + e.name);
        break;
      case ConceptExpr::Kind::kSome:
        if (!HasRole(e.role)) throw OntologyError("undeclared role: " + e.role);
        CheckDeclared(e.args[0]);
        break;
      case ConceptExpr::Kind::kAnd:
      case ConceptExpr::Kind::kOr:
        for (const auto& a : e.args) CheckDeclared(a);
        break;
      default:
        break;
    }
  }
};

inline std::string ConceptAssertion::ExprKey(const ConceptExpr& e) {
  std::string s = std::to_string(static_cast<int>(e.kind)) + e.name + e.role;
  for (const auto& a : e.args) s += "(" + ExprKey(a) + ")";
  return s;
}

// ---------------------------------------------------------------------------
// Parsing and serialization.
//
// Line-oriented format, '#' starts a comment:
//   concept <Name>
//   role <name> [parent <name>] [inverse <name>] [transitive] [symmetric]
//               [domain <expr>] [range <expr>] [max <n> <expr>]
//   sub <expr> <expr>
//   equiv <expr> <expr>
//   disjoint <expr> <expr>
// where <expr> = Name | Top | Bottom | (and e1 e2 ...) | (or e1 e2 ...)
//              | (some role e)
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> Lex(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '#') break;
    if (c == '(' || c == ')') {
      if (!cur.empty()) out.push_back(cur), cur.clear();
      out.push_back(std::string(1, c));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

class ExprParser {
 public:
  ExprParser(const std::vector<std::string>& toks, size_t* pos, int line)
      : toks_(toks), pos_(pos), line_(line) {}

  ConceptExpr Parse() {
    if (*pos_ >= toks_.size()) throw SyntaxError(line_, "expected expression");
    const std::string& t = toks_[*pos_];
    if (t == "(") {
      ++*pos_;
      const std::string op = Next("operator");
      ConceptExpr e;
      if (op == "and" || op == "or") {
        std::vector<ConceptExpr> args;
        while (*pos_ < toks_.size() && toks_[*pos_] != ")")
          args.push_back(Parse());
        if (args.size() < 2)
          throw SyntaxError(line_, op + " needs at least two operands");
        e = op == "and" ? ConceptExpr::And(std::move(args))
                        : ConceptExpr::Or(std::move(args));
      } else if (op == "some") {
        std::string role = Next("role name");
        ConceptExpr filler = Parse();
        e = ConceptExpr::Some(std::move(role), std::move(filler));
      } else {
        throw SyntaxError(line_, "unknown operator: " + op);
      }
      if (Next("')'") != ")") throw SyntaxError(line_, "expected ')'");
      return e;
    }
    ++*pos_;
    if (t == "Top" || t == "Thing") return ConceptExpr::Top();
    if (t == "Bottom" || t == "Nothing") return ConceptExpr::Bottom();
    return ConceptExpr::Atomic(t);
  }

 private:
  std::string Next(const char* what) {
    if (*pos_ >= toks_.size())
      throw SyntaxError(line_, std::string("expected ") + what);
    return toks_[(*pos_)++];
  }
  const std::vector<std::string>& toks_;
  size_t* pos_;
  int line_;
};

inline void CheckRoleGraphAcyclic(const KnowledgeBase& kb) {
  // DFS over parent_roles.
  std::map<std::string, int> state;  // 0 unseen, 1 on stack, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& r) {
    state[r] = 1;
    auto it = kb.roles.find(r);
    if (it != kb.roles.end()) {
      for (const auto& p : it->second.parent_roles) {
        if (state[p] == 1)
          throw OntologyError("cyclic role hierarchy through: " + r);
        if (state[p] == 0) visit(p);
      }
    }
    state[r] = 2;
  };
  for (const auto& [name, decl] : kb.roles)
    if (state[name] == 0) visit(name);
}

}  // namespace detail

inline KnowledgeBase ParseOntology(const std::string& source) {
  KnowledgeBase kb;
  std::vector<std::pair<int, std::vector<std::string>>> lines;
  {
    std::istringstream in(source);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto toks = detail::Lex(line);
      if (!toks.empty()) lines.emplace_back(lineno, std::move(toks));
    }
  }

  // First pass: declare all symbols so later lines can reference them.
  for (const auto& [lineno, toks] : lines) {
    if (toks[0] == "concept") {
      if (toks.size() != 2) throw SyntaxError(lineno, "concept <Name>");
      kb.concepts.insert(toks[1]);
    } else if (toks[0] == "role") {
      if (toks.size() < 2) throw SyntaxError(lineno, "role <name> ...");
      RoleDecl d;
      d.name = toks[1];
      kb.roles.emplace(d.name, d);
    }
  }

  for (const auto& [lineno, toks] : lines) {
    const std::string& kw = toks[0];
    if (kw == "concept") continue;
    if (kw == "role") {
      RoleDecl& d = kb.roles.at(toks[1]);
      size_t i = 2;
      while (i < toks.size()) {
        const std::string& opt = toks[i];
        if (opt == "parent") {
          if (++i >= toks.size()) throw SyntaxError(lineno, "parent <role>");
          if (!kb.HasRole(toks[i]))
            throw SyntaxError(lineno, "undeclared role: " + toks[i]);
          d.parent_roles.insert(toks[i++]);
        } else if (opt == "inverse") {
          if (++i >= toks.size()) throw SyntaxError(lineno, "inverse <role>");
          if (!kb.HasRole(toks[i]))
            throw SyntaxError(lineno, "undeclared role: " + toks[i]);
          d.inverse_of = toks[i++];
        } else if (opt == "transitive") {
          d.transitive = true;
          ++i;
        } else if (opt == "symmetric") {
          d.symmetric = true;
          ++i;
        } else if (opt == "domain" || opt == "range" || opt == "max") {
          bool is_max = opt == "max";
          int n = 0;
          ++i;
          if (is_max) {
            if (i >= toks.size()) throw SyntaxError(lineno, "max <n> <expr>");
            try {
              n = std::stoi(toks[i]);
            } catch (...) {
              throw SyntaxError(lineno, "max cardinality must be an integer");
            }
            if (n < 0) throw SyntaxError(lineno, "max cardinality negative");
            ++i;
          }
          detail::ExprParser p(toks, &i, lineno);
          ConceptExpr e = p.Parse();
          try {
            kb.CheckDeclared(e);
          } catch (const OntologyError& err) {
            throw SyntaxError(lineno, err.what());
          }
          if (opt == "domain")
            d.domain = e;
          else if (opt == "range")
            d.range = e;
          else
            d.max_cardinality = std::make_pair(n, e);
        } else {
          throw SyntaxError(lineno, "unknown role option: " + opt);
        }
      }
    } else if (kw == "sub" || kw == "equiv" || kw == "disjoint") {
      size_t i = 1;
      detail::ExprParser p(toks, &i, lineno);
      ConceptExpr lhs = p.Parse();
      ConceptExpr rhs = p.Parse();
      if (i != toks.size()) throw SyntaxError(lineno, "trailing tokens");
      try {
        kb.CheckDeclared(lhs);
        kb.CheckDeclared(rhs);
      } catch (const OntologyError& err) {
        throw SyntaxError(lineno, err.what());
      }
      Axiom a;
      a.type = kw == "sub"     ? Axiom::Type::kSubsumption
               : kw == "equiv" ? Axiom::Type::kEquivalence
                               : Axiom::Type::kDisjointness;
      a.lhs = std::move(lhs);
      a.rhs = std::move(rhs);
      kb.axioms.push_back(std::move(a));
    } else {
      throw SyntaxError(lineno, "unknown directive: " + kw);
    }
  }

  // Make inverse declarations mutual and validate the hierarchy.
  for (auto& [name, d] : kb.roles) {
    if (d.inverse_of) {
      RoleDecl& inv = kb.roles.at(*d.inverse_of);
      if (inv.inverse_of && *inv.inverse_of != name)
        throw OntologyError("conflicting inverse declarations on " + name);
      inv.inverse_of = name;
    }
  }
  detail::CheckRoleGraphAcyclic(kb);
  return kb;
}

inline std::string SerializeExpr(const ConceptExpr& e) {
  switch (e.kind) {
    case ConceptExpr::Kind::kAtomic:
      return e.name;
    case ConceptExpr::Kind::kTop:
      return "Top";
    case ConceptExpr::Kind::kBottom:
      return "Bottom";
    case ConceptExpr::Kind::kAnd:
    case ConceptExpr::Kind::kOr: {
      std::string s = e.kind == ConceptExpr::Kind::kAnd ? "(and" : "(or";
      for (const auto& a : e.args) s += " " + SerializeExpr(a);
      return s + ")";
    }
    case ConceptExpr::Kind::kSome:
      return "(some " + e.role + " " + SerializeExpr(e.args[0]) + ")";
  }
  return "Top";
}

inline std::string SerializeOntology(const KnowledgeBase& kb) {
  std::ostringstream out;
  for (const auto& c : kb.concepts) out << "concept " << c << "\n";
  for (const auto& [name, d] : kb.roles) {
    out << "role " << name;
    for (const auto& p : d.parent_roles) out << " parent " << p;
    if (d.inverse_of) out << " inverse " << *d.inverse_of;
    if (d.transitive) out << " transitive";
    if (d.symmetric) out << " symmetric";
    if (d.domain) out << " domain " << SerializeExpr(*d.domain);
    if (d.range) out << " range " << SerializeExpr(*d.range);
    if (d.max_cardinality)
      out << " max " << d.max_cardinality->first << " "
          << SerializeExpr(d.max_cardinality->second);
    out << "\n";
  }
  for (const auto& a : kb.axioms) {
    const char* kw = a.type == Axiom::Type::kSubsumption   ? "sub"
                     : a.type == Axiom::Type::kEquivalence ? "equiv"
                                                           : "disjoint";
    out << kw << " " << SerializeExpr(a.lhs) << " " << SerializeExpr(a.rhs)
        << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Role hierarchy helpers.
// ---------------------------------------------------------------------------

// Reflexive-transitive closure of the role parent relation.
inline std::map<std::string, std::set<std::string>> RoleSuperClosure(
    const KnowledgeBase& kb) {
  std::map<std::string, std::set<std::string>> sup;
  for (const auto& [name, d] : kb.roles) sup[name].insert(name);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, d] : kb.roles) {
      for (const auto& p : d.parent_roles) {
        for (const auto& s : sup[p])
          if (sup[name].insert(s).second) changed = true;
      }
    }
  }
  return sup;
}

// ---------------------------------------------------------------------------
// ABox saturation.
// ---------------------------------------------------------------------------

namespace detail {

// Truth of a concept expression for an individual against closed sets.
inline bool Holds(const ConceptExpr& e, const std::string& ind,
                  const std::map<std::string, std::set<std::string>>& atoms,
                  const std::set<RoleAssertion>& roles) {
  switch (e.kind) {
    case ConceptExpr::Kind::kTop:
      return true;
    case ConceptExpr::Kind::kBottom:
      return false;
    case ConceptExpr::Kind::kAtomic: {
      auto it = atoms.find(ind);
      return it != atoms.end() && it->second.count(e.name) > 0;
    }
    case ConceptExpr::Kind::kAnd:
      return std::all_of(e.args.begin(), e.args.end(), [&](const auto& a) {
        return Holds(a, ind, atoms, roles);
      });
    case ConceptExpr::Kind::kOr:
      return std::any_of(e.args.begin(), e.args.end(), [&](const auto& a) {
        return Holds(a, ind, atoms, roles);
      });
    case ConceptExpr::Kind::kSome:
      for (const auto& r : roles) {
        if (r.role == e.role && r.subject == ind &&
            Holds(e.args[0], r.object, atoms, roles))
          return true;
      }
      return false;
  }
  return false;
}

// Collect atomic conjunctive parts of an expression. Disjunctions and
// existentials on the right-hand side are not materialized.
inline void AtomicParts(const ConceptExpr& e, std::set<std::string>* out) {
  if (e.kind == ConceptExpr::Kind::kAtomic) out->insert(e.name);
  if (e.kind == ConceptExpr::Kind::kAnd)
    for (const auto& a : e.args) AtomicParts(a, out);
}

}  // namespace detail

// Closes the ABox under role inheritance, inverses, symmetry, transitivity,
// domain/range restrictions, and the TBox concept axioms. Deterministic
// fixpoint; the result is idempotent under re-saturation.
inline KnowledgeBase Saturate(const KnowledgeBase& kb) {
  KnowledgeBase out = kb;
  auto role_sup = RoleSuperClosure(kb);

  std::map<std::string, std::set<std::string>> atoms;
  for (const auto& a : out.concept_assertions)
    detail::AtomicParts(a.expr, &atoms[a.individual]);
  for (const auto& [id, ind] : out.individuals) atoms[id];  // ensure key

  std::set<RoleAssertion> roles = out.role_assertions;

  bool changed = true;
  while (changed) {
    changed = false;

    // Role rules.
    std::vector<RoleAssertion> to_add;
    for (const auto& r : roles) {
      const RoleDecl& d = out.roles.at(r.role);
      for (const auto& s : role_sup[r.role])
        if (s != r.role) to_add.push_back({s, r.subject, r.object});
      if (d.inverse_of) to_add.push_back({*d.inverse_of, r.object, r.subject});
      if (d.symmetric) to_add.push_back({r.role, r.object, r.subject});
      if (d.transitive) {
        for (const auto& r2 : roles)
          if (r2.role == r.role && r2.subject == r.object)
            to_add.push_back({r.role, r.subject, r2.object});
      }
    }
    for (const auto& r : to_add)
      if (roles.insert(r).second) changed = true;

    // Domain/range restrictions add concept memberships.
    for (const auto& r : roles) {
      const RoleDecl& d = out.roles.at(r.role);
      if (d.domain) {
        std::set<std::string> parts;
        detail::AtomicParts(*d.domain, &parts);
        for (const auto& c : parts)
          if (atoms[r.subject].insert(c).second) changed = true;
      }
      if (d.range) {
        std::set<std::string> parts;
        detail::AtomicParts(*d.range, &parts);
        for (const auto& c : parts)
          if (atoms[r.object].insert(c).second) changed = true;
      }
    }

    // Concept axioms. Equivalences fire in both directions; disjunctive or
    // existential right-hand sides are not materialized.
    for (const auto& [id, ind] : out.individuals) {
      for (const auto& ax : out.axioms) {
        if (ax.type == Axiom::Type::kDisjointness) continue;
        auto apply = [&](const ConceptExpr& lhs, const ConceptExpr& rhs) {
          if (!detail::Holds(lhs, id, atoms, roles)) return;
          std::set<std::string> parts;
          detail::AtomicParts(rhs, &parts);
          for (const auto& c : parts)
            if (atoms[id].insert(c).second) changed = true;
        };
        apply(ax.lhs, ax.rhs);
        if (ax.type == Axiom::Type::kEquivalence) apply(ax.rhs, ax.lhs);
      }
    }
  }

  // Also evaluate general (non-atomic) asserted expressions once: an asserted
  // conjunction contributes its atomic parts via AtomicParts above already.
  out.role_assertions = std::move(roles);
  std::vector<ConceptAssertion> assertions;
  for (const auto& [id, set] : atoms)
    for (const auto& c : set)
      assertions.push_back({id, ConceptExpr::Atomic(c)});
  // Keep non-atomic originals so saturation preserves what was said.
  for (const auto& a : kb.concept_assertions)
    if (a.expr.kind != ConceptExpr::Kind::kAtomic)
      assertions.push_back(a);
  std::sort(assertions.begin(), assertions.end());
  assertions.erase(std::unique(assertions.begin(), assertions.end()),
                   assertions.end());
  out.concept_assertions = std::move(assertions);
  return out;
}

// All atomic concepts a saturated KB entails for an individual.
inline std::set<std::string> Realize(const KnowledgeBase& saturated,
                                     const std::string& individual) {
  if (!saturated.individuals.count(individual))
    throw OntologyError("unknown individual: " + individual);
  std::set<std::string> out;
  for (const auto& a : saturated.concept_assertions)
    if (a.individual == individual &&
        a.expr.kind == ConceptExpr::Kind::kAtomic)
      out.insert(a.expr.name);
  return out;
}

// ---------------------------------------------------------------------------
// TBox classification.
// ---------------------------------------------------------------------------

// Entailed atomic superconcepts plus entailed existentials per atomic concept.
class SubsumptionHierarchy {
 public:
  explicit SubsumptionHierarchy(const KnowledgeBase& kb) : kb_(&kb) {
    role_sup_ = RoleSuperClosure(kb);
    for (const auto& c : kb.concepts) supers_[c].insert(c);

    // Role domain restrictions as concept axioms: (some r Top) sub domain.
    std::vector<Axiom> axioms = kb.axioms;
    for (const auto& [name, d] : kb.roles) {
      if (d.domain) {
        Axiom a;
        a.type = Axiom::Type::kSubsumption;
        a.lhs = ConceptExpr::Some(name, ConceptExpr::Top());
        a.rhs = *d.domain;
        axioms.push_back(a);
      }
    }

    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : kb.concepts) {
        for (const auto& ax : axioms) {
          if (ax.type == Axiom::Type::kDisjointness) continue;
          auto apply = [&](const ConceptExpr& lhs, const ConceptExpr& rhs) {
            if (!HoldsFor(c, lhs)) return;
            std::set<std::string> parts;
            detail::AtomicParts(rhs, &parts);
            for (const auto& s : parts)
              if (supers_[c].insert(s).second) changed = true;
            if (AddExistentialParts(c, rhs)) changed = true;
          };
          apply(ax.lhs, ax.rhs);
          if (ax.type == Axiom::Type::kEquivalence) apply(ax.rhs, ax.lhs);
        }
      }
    }
  }

  // Whether atomic `sub` is entailed to be subsumed by atomic `sup`.
  bool Subsumes(const std::string& sup, const std::string& sub) const {
    auto it = supers_.find(sub);
    return it != supers_.end() && it->second.count(sup) > 0;
  }

  const std::set<std::string>& Supers(const std::string& atomic) const {
    static const std::set<std::string> kEmpty;
    auto it = supers_.find(atomic);
    return it == supers_.end() ? kEmpty : it->second;
  }

  // Structural entailment test over expressions.
  bool Entails(const ConceptExpr& sub, const ConceptExpr& sup) const {
    switch (sup.kind) {
      case ConceptExpr::Kind::kTop:
        return true;
      case ConceptExpr::Kind::kAnd:
        return std::all_of(sup.args.begin(), sup.args.end(),
                           [&](const auto& a) { return Entails(sub, a); });
      case ConceptExpr::Kind::kOr:
        if (std::any_of(sup.args.begin(), sup.args.end(),
                        [&](const auto& a) { return Entails(sub, a); }))
          return true;
        break;
      default:
        break;
    }
    switch (sub.kind) {
      case ConceptExpr::Kind::kBottom:
        return true;
      case ConceptExpr::Kind::kOr:
        return std::all_of(sub.args.begin(), sub.args.end(),
                           [&](const auto& a) { return Entails(a, sup); });
      case ConceptExpr::Kind::kAnd:
        return std::any_of(sub.args.begin(), sub.args.end(),
                           [&](const auto& a) { return Entails(a, sup); });
      case ConceptExpr::Kind::kAtomic:
        if (sup.kind == ConceptExpr::Kind::kAtomic)
          return Subsumes(sup.name, sub.name);
        if (sup.kind == ConceptExpr::Kind::kSome) {
          auto it = exists_.find(sub.name);
          if (it == exists_.end()) return false;
          for (const auto& [role, filler] : it->second) {
            if (!RoleLeq(role, sup.role)) continue;
            if (sup.args[0].kind == ConceptExpr::Kind::kTop ||
                Entails(ConceptExpr::Atomic(filler), sup.args[0]))
              return true;
          }
        }
        return false;
      case ConceptExpr::Kind::kSome:
        if (sup.kind == ConceptExpr::Kind::kSome)
          return RoleLeq(sub.role, sup.role) &&
                 Entails(sub.args[0], sup.args[0]);
        if (sup.kind == ConceptExpr::Kind::kAtomic) {
          // Via domain restriction of the role or one of its parents.
          for (const auto& r : RoleSupers(sub.role)) {
            const auto& d = kb_->roles.at(r);
            if (d.domain && Entails(*d.domain, sup)) return true;
          }
        }
        return false;
      default:
        return false;
    }
  }

 private:
  bool RoleLeq(const std::string& sub, const std::string& sup) const {
    auto it = role_sup_.find(sub);
    return it != role_sup_.end() && it->second.count(sup) > 0;
  }
  const std::set<std::string>& RoleSupers(const std::string& r) const {
    static const std::set<std::string> kEmpty;
    auto it = role_sup_.find(r);
    return it == role_sup_.end() ? kEmpty : it->second;
  }

  // Truth of lhs for atomic concept c given the current closure.
  bool HoldsFor(const std::string& c, const ConceptExpr& e) const {
    switch (e.kind) {
      case ConceptExpr::Kind::kTop:
        return true;
      case ConceptExpr::Kind::kBottom:
        return false;
      case ConceptExpr::Kind::kAtomic:
        return supers_.at(c).count(e.name) > 0;
      case ConceptExpr::Kind::kAnd:
        return std::all_of(e.args.begin(), e.args.end(),
                           [&](const auto& a) { return HoldsFor(c, a); });
      case ConceptExpr::Kind::kOr:
        return std::any_of(e.args.begin(), e.args.end(),
                           [&](const auto& a) { return HoldsFor(c, a); });
      case ConceptExpr::Kind::kSome: {
        auto it = exists_.find(c);
        if (it == exists_.end()) return false;
        for (const auto& [role, filler] : it->second) {
          if (!RoleLeq(role, e.role)) continue;
          if (e.args[0].kind == ConceptExpr::Kind::kTop) return true;
          std::set<std::string> parts;
          detail::AtomicParts(e.args[0], &parts);
          bool all = !parts.empty();
          for (const auto& p : parts)
            if (!supers_.at(filler).count(p)) all = false;
          if (all) return true;
        }
        return false;
      }
    }
    return false;
  }

  // Record entailed existentials from conjunctive parts of a RHS.
  bool AddExistentialParts(const std::string& c, const ConceptExpr& e) {
    bool changed = false;
    if (e.kind == ConceptExpr::Kind::kSome &&
        e.args[0].kind == ConceptExpr::Kind::kAtomic) {
      changed = exists_[c].insert({e.role, e.args[0].name}).second;
    } else if (e.kind == ConceptExpr::Kind::kAnd) {
      for (const auto& a : e.args)
        if (AddExistentialParts(c, a)) changed = true;
    }
    return changed;
  }

  const KnowledgeBase* kb_;
  std::map<std::string, std::set<std::string>> supers_;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> exists_;
  std::map<std::string, std::set<std::string>> role_sup_;
};

inline SubsumptionHierarchy Classify(const KnowledgeBase& kb) {
  return SubsumptionHierarchy(kb);
}

inline bool IsSubsumed(const KnowledgeBase& kb, const ConceptExpr& sub,
                       const ConceptExpr& sup) {
  kb.CheckDeclared(sub);
  kb.CheckDeclared(sup);
  return SubsumptionHierarchy(kb).Entails(sub, sup);
}

// ---------------------------------------------------------------------------
// Consistency checking.
// ---------------------------------------------------------------------------

struct Violation {
  std::string description;
  std::vector<std::string> individuals;
  std::string axiom;
};

struct ConsistencyReport {
  std::vector<Violation> violations;
  bool consistent() const { return violations.empty(); }
};

// Checks a saturated KB for max-cardinality and disjointness violations.
// Distinct individual ids denote distinct individuals.
inline ConsistencyReport CheckConsistency(const KnowledgeBase& kb) {
  ConsistencyReport report;

  std::map<std::string, std::set<std::string>> atoms;
  for (const auto& a : kb.concept_assertions)
    if (a.expr.kind == ConceptExpr::Kind::kAtomic)
      atoms[a.individual].insert(a.expr.name);

  for (const auto& [rname, d] : kb.roles) {
    if (!d.max_cardinality) continue;
    const auto& [n, filler] = *d.max_cardinality;
    std::map<std::string, std::set<std::string>> fillers;
    for (const auto& r : kb.role_assertions) {
      if (r.role != rname) continue;
      if (detail::Holds(filler, r.object, atoms, kb.role_assertions))
        fillers[r.subject].insert(r.object);
    }
    for (const auto& [subject, objs] : fillers) {
      if (static_cast<int>(objs.size()) > n) {
        Violation v;
        v.description = subject + " has " + std::to_string(objs.size()) +
                        " distinct " + rname + " fillers, at most " +
                        std::to_string(n) + " allowed";
        v.individuals.push_back(subject);
        v.individuals.insert(v.individuals.end(), objs.begin(), objs.end());
        v.axiom = "max " + std::to_string(n) + " " + rname + " " +
                  SerializeExpr(filler);
        report.violations.push_back(std::move(v));
      }
    }
  }

  for (const auto& ax : kb.axioms) {
    if (ax.type != Axiom::Type::kDisjointness) continue;
    for (const auto& [id, ind] : kb.individuals) {
      if (detail::Holds(ax.lhs, id, atoms, kb.role_assertions) &&
          detail::Holds(ax.rhs, id, atoms, kb.role_assertions)) {
        Violation v;
        v.description = id + " belongs to disjoint concepts";
        v.individuals.push_back(id);
        v.axiom = "disjoint " + SerializeExpr(ax.lhs) + " " +
                  SerializeExpr(ax.rhs);
        report.violations.push_back(std::move(v));
      }
    }
  }
  return report;
}

}  // namespace ontology
}  // namespace folktale

#endif  // FOLKTALE_ONTOLOGY_HPP_
