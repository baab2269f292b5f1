#pragma once

// Token-level parsing shared by the rule and pattern parsers.

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "inferbench/error.hpp"
#include "inferbench/rule.hpp"

namespace inferbench::detail {

struct RawTerm {
  bool is_variable = true;
  std::string text;
  std::size_t pos = 0;
};

struct RawAtom {
  AtomKind kind = AtomKind::Relation;
  std::string predicate;  // relation or type name; empty for inequalities
  std::size_t predicate_pos = 0;
  RawTerm first;
  RawTerm second;
};

struct RawClause {
  std::vector<RawAtom> body;
  RawAtom head;
};

/// Native syntax. Throws ParseError with line 0 and a byte column.
RawClause parse_native_clause(std::string_view text, std::string_view type_marker);

/// `head <= body` syntax (text after the last TAB).
RawClause parse_arrow_clause(std::string_view text, std::string_view type_marker);

/// Resolves a raw clause into a Rule. Variables are numbered in order of
/// first appearance; `resolve(name, kind, pos, atom)` fills in the atom's
/// predicate (and may mark it templated).
template <class Resolve>
Rule build_rule(const RawClause& raw, SymbolTable& symbols, Resolve&& resolve) {
  Rule rule;
  std::unordered_map<std::string, std::uint32_t> var_index;
  auto term = [&](const RawTerm& t) -> Term {
    if (!t.is_variable) return Term::constant(symbols.intern_constant(t.text));
    auto [it, inserted] =
        var_index.emplace(t.text, static_cast<std::uint32_t>(rule.variables.size()));
    if (inserted) rule.variables.push_back(t.text);
    return Term::variable(it->second);
  };
  auto atom = [&](const RawAtom& a) -> Atom {
    Atom out;
    out.kind = a.kind;
    out.first = term(a.first);
    if (a.kind != AtomKind::Type) out.second = term(a.second);
    if (a.kind != AtomKind::Inequality) {
      const auto kind =
          a.kind == AtomKind::Type ? PredicateKind::Type : PredicateKind::Relation;
      resolve(a.predicate, kind, a.predicate_pos, out);
    }
    return out;
  };
  for (const auto& a : raw.body) rule.body.push_back(atom(a));
  rule.head = atom(raw.head);
  return rule;
}

}  // namespace inferbench::detail

