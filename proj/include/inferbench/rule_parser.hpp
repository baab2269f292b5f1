#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "inferbench/rule.hpp"
#include "inferbench/symbols.hpp"

namespace inferbench {

/// Parses one rule in the native grammar:
///
///   rule := body "->" head
///   body := atom ("," atom)*
///   atom := "(" term "," pred "," term ")"
///         | "(" term "," <type marker> "," typename ")"
///         | term "!=" term
///   term := lowercase-ident | "<" name ">"
///
/// Predicates are interned with the kind implied by their position. Throws
/// ParseError on syntax errors (column = byte offset), and Error(Data) on
/// unsafe rules or predicate kind conflicts.
Rule parse_rule(std::string_view text, SymbolTable& symbols);

/// Parses `head <= body` rules as written by common rule miners, e.g.
/// `0.91\t12\t11\tr(X,Y) <= s(Y,X), t(X,A)`. Leading tab-separated numeric
/// columns are ignored. Terms that are an uppercase letter optionally followed
/// by digits are variables; everything else is a constant.
Rule parse_arrow_rule(std::string_view text, SymbolTable& symbols);

enum class RuleFormat { Native, Arrow };

struct RuleFileEntry {
  Rule rule;
  std::size_t line = 0;
  /// Text after a "<TAB>#" trailer, without the '#'.
  std::string annotation;
};

struct RuleFile {
  std::vector<RuleFileEntry> entries;
  /// Lines rejected when skip_invalid is set.
  std::size_t skipped = 0;
  std::vector<std::string> errors;
};

/// One rule per line; blank lines and lines starting with '#' are ignored.
/// Without skip_invalid the first bad line throws (message carries the line
/// number); with it, bad lines are counted and their errors kept.
RuleFile read_rule_file(std::istream& in, SymbolTable& symbols,
                        RuleFormat format = RuleFormat::Native,
                        bool skip_invalid = false);
RuleFile read_rule_file(const std::filesystem::path& path,
                        SymbolTable& symbols,
                        RuleFormat format = RuleFormat::Native,
                        bool skip_invalid = false);

std::vector<Rule> rules_of(const RuleFile& file);

}  // namespace inferbench
