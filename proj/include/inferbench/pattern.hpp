#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inferbench/kg.hpp"
#include "inferbench/rule.hpp"

namespace inferbench {

/// Placeholder for a predicate: `_R` style names stand for relations, `_t`
/// style names for types.
struct PredicateTemplate {
  std::string name;
  PredicateKind kind = PredicateKind::Relation;
};

/// A rule whose atoms may carry templates instead of predicates. A templated
/// atom has `templated` set and `predicate` holding an index into
/// `templates`.
struct Pattern {
  std::string name;
  Rule shape;
  std::vector<PredicateTemplate> templates;

  /// Template of the head when it occurs nowhere in the body.
  std::optional<std::uint32_t> free_head_template() const;
  /// Templates used in the body, in first-occurrence order.
  std::vector<std::uint32_t> body_templates() const;
};

/// Parses `[@name] body -> head` in the rule grammar, where predicates may
/// be templates. Concrete predicates are interned like in parse_rule.
Pattern parse_pattern(std::string_view text, SymbolTable& symbols, std::string name = {});

/// One pattern per line; `#` comments and blank lines are skipped. Unnamed
/// patterns are called `pattern<n>` after their position in the file.
std::vector<Pattern> read_patterns(std::istream& in, SymbolTable& symbols);
std::vector<Pattern> read_patterns(const std::filesystem::path& path, SymbolTable& symbols);

/// Pattern library shipped with the tool (same text as patterns/default.txt).
std::string_view builtin_pattern_text();
std::vector<Pattern> builtin_patterns(SymbolTable& symbols);

/// Replaces every template by `assignment[template index]`.
Rule instantiate(const Pattern& pattern, std::span<const PredicateId> assignment);

struct Candidates {
  std::vector<Rule> rules;  // sorted by canonical text, no two equal
  std::vector<std::string> warnings;
};

/// Every rule obtained by mapping the body templates injectively to
/// predicates of matching kind in the signature of `kg`. A head template
/// absent from the body gets a random predicate of its kind that the body
/// does not use, drawn from a stream keyed by (seed, pattern name, canonical
/// body text).
Candidates instantiate_candidates(const Pattern& pattern, const KnowledgeGraph& kg,
                                  std::uint64_t seed);

/// The members of instantiate_candidates with at least one witness, found by
/// walking the joins of `kg` instead of trying every assignment.
Candidates enumerate_supported_candidates(const Pattern& pattern, const KnowledgeGraph& kg,
                                          std::uint64_t seed, unsigned workers = 1);

struct RankedRule {
  Rule rule;
  std::uint64_t support = 0;
  std::string pattern;
  std::string canonical;
};

struct Selection {
  std::vector<RankedRule> rules;
  std::vector<std::string> warnings;
};

/// Orders by descending support, then canonical text.
void rank(std::vector<RankedRule>& rules);

/// Per pattern, the k1 supported candidates ranked first; the union keeps
/// the first pattern that produced a rule.
Selection select_rules(std::span<const Pattern> patterns, const KnowledgeGraph& kg,
                       std::size_t k1, std::uint64_t seed, unsigned workers = 1);

/// Manual mode: supports for a fixed rule list, kept in input order.
/// Canonically equal duplicates are dropped; rules without support are kept
/// with a warning.
Selection support_of(std::span<const Rule> rules, const KnowledgeGraph& kg,
                     unsigned workers = 1, std::string_view label = "manual");

}  // namespace inferbench
