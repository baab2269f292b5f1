#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "inferbench/symbols.hpp"
#include "inferbench/triple.hpp"

namespace inferbench {

/// Variable (index into Rule::variables) or constant.
struct Term {
  enum class Kind : std::uint8_t { Variable, Constant };

  Kind kind = Kind::Variable;
  std::uint32_t value = 0;

  static constexpr Term variable(std::uint32_t index) {
    return Term{Kind::Variable, index};
  }
  static constexpr Term constant(ConstantId c) {
    return Term{Kind::Constant, index_of(c)};
  }

  constexpr bool is_variable() const { return kind == Kind::Variable; }
  constexpr std::uint32_t var() const { return value; }
  constexpr ConstantId constant_id() const { return ConstantId{value}; }

  friend constexpr auto operator<=>(const Term&, const Term&) = default;
};

enum class AtomKind : std::uint8_t { Relation, Type, Inequality };

/// (first, R, second), (first, type, t) or first != second. In patterns a
/// predicate may be a template; `predicate` then indexes Pattern::templates.
struct Atom {
  AtomKind kind = AtomKind::Relation;
  PredicateId predicate{};
  bool templated = false;
  Term first;
  Term second;

  static Atom relation(Term s, PredicateId r, Term o) {
    return Atom{AtomKind::Relation, r, false, s, o};
  }
  static Atom type(Term e, PredicateId t) {
    return Atom{AtomKind::Type, t, false, e, Term{}};
  }
  static Atom inequality(Term a, Term b) {
    return Atom{AtomKind::Inequality, PredicateId{}, false, a, b};
  }

  bool is_inequality() const { return kind == AtomKind::Inequality; }
  /// Number of terms: one for type atoms, two otherwise.
  std::size_t arity() const { return kind == AtomKind::Type ? 1 : 2; }
  const Term& term(std::size_t i) const { return i == 0 ? first : second; }

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// body -> head. Variables are numbered densely; `variables` holds their
/// source names.
struct Rule {
  std::vector<Atom> body;
  Atom head;
  std::vector<std::string> variables;

  std::size_t variable_count() const { return variables.size(); }
  bool has_inequalities() const;
  std::size_t positive_body_size() const;
};

/// Throws Error(Data) if the head is an inequality, the body has no
/// inequality-free atom, or some variable occurs in no inequality-free body
/// atom.
void check_safety(const Rule& rule);
bool is_safe(const Rule& rule);

/// Instantiates a non-inequality atom. Variables must be bound in `binding`.
Triple ground(const Atom& atom, std::span<const ConstantId> binding);

/// Native rule syntax, re-parseable by parse_rule.
std::string to_string(const Rule& rule, const SymbolTable& symbols);

/// Text that is equal for two rules iff they are identical up to variable
/// renaming, body-atom order, duplicate body atoms and the orientation of
/// inequalities. Predicates and constants are named, so the text is stable
/// across symbol tables.
std::string canonical_text(const Rule& rule, const SymbolTable& symbols);

/// canonical_text for a body on its own (no head).
std::string canonical_body_text(const Rule& rule, const SymbolTable& symbols);

/// Drops body atoms that are exact duplicates; keeps the first occurrence.
void remove_duplicate_body_atoms(Rule& rule);

}  // namespace inferbench
