#pragma once

#include <span>
#include <string>
#include <vector>

#include "inferbench/rule.hpp"

namespace inferbench {

struct RuleVerdict {
  std::string rule;  // canonical text of the benchmark rule
  bool entailed = false;
  bool contained = false;
};

struct RuleComparison {
  std::vector<RuleVerdict> verdicts;  // benchmark order
  double epsilon_ent = 0;   // percent
  double epsilon_cont = 0;  // percent
  std::size_t sys_rules = 0;
  std::size_t sys_skipped = 0;
};

/// Percentage of `bench` entailed by `sys`. Throws Error(Data) when `bench`
/// is empty.
double epsilon_ent(std::span<const Rule> bench, std::span<const Rule> sys, unsigned workers = 1);

/// Percentage of `bench` equal to some rule of `sys` up to variable renaming
/// and body order.
double epsilon_cont(std::span<const Rule> bench, std::span<const Rule> sys,
                    const SymbolTable& symbols);

RuleComparison compare_rules(std::span<const Rule> bench, std::span<const Rule> sys,
                             const SymbolTable& symbols, unsigned workers = 1);

std::string format_comparison(const RuleComparison& report);

}  // namespace inferbench
