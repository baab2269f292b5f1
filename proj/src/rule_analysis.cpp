#include "inferbench/rule_analysis.hpp"

#include <cstdio>
#include <unordered_set>

#include "inferbench/entailment.hpp"
#include "inferbench/error.hpp"
#include "inferbench/parallel.hpp"

namespace inferbench {
namespace {

void require_bench(std::span<const Rule> bench) {
  if (bench.empty()) throw Error(ErrorKind::Data, "no benchmark rules: the metric is undefined");
}

double percent_true(const std::vector<char>& flags) {
  std::size_t n = 0;
  for (char f : flags) n += f ? 1 : 0;
  return 100.0 * static_cast<double>(n) / static_cast<double>(flags.size());
}

std::vector<char> entailed_flags(std::span<const Rule> bench, std::span<const Rule> sys,
                                 unsigned workers) {
  std::vector<char> flags(bench.size(), 0);
  parallel_for(bench.size(), workers, [&](std::size_t i) { flags[i] = entails(sys, bench[i]); });
  return flags;
}

std::vector<char> contained_flags(std::span<const Rule> bench, std::span<const Rule> sys,
                                  const SymbolTable& symbols) {
  std::unordered_set<std::string> texts;
  for (const auto& r : sys) texts.insert(canonical_text(r, symbols));
  std::vector<char> flags;
  for (const auto& r : bench) flags.push_back(texts.contains(canonical_text(r, symbols)));
  return flags;
}

}  // namespace

double epsilon_ent(std::span<const Rule> bench, std::span<const Rule> sys, unsigned workers) {
  require_bench(bench);
  return percent_true(entailed_flags(bench, sys, workers));
}

double epsilon_cont(std::span<const Rule> bench, std::span<const Rule> sys,
                    const SymbolTable& symbols) {
  require_bench(bench);
  return percent_true(contained_flags(bench, sys, symbols));
}

RuleComparison compare_rules(std::span<const Rule> bench, std::span<const Rule> sys,
                             const SymbolTable& symbols, unsigned workers) {
  require_bench(bench);
  const auto ent = entailed_flags(bench, sys, workers);
  const auto cont = contained_flags(bench, sys, symbols);
  RuleComparison out;
  out.sys_rules = sys.size();
  for (std::size_t i = 0; i < bench.size(); ++i) {
    out.verdicts.push_back({canonical_text(bench[i], symbols), ent[i] != 0, cont[i] != 0});
  }
  out.epsilon_ent = percent_true(ent);
  out.epsilon_cont = percent_true(cont);
  return out;
}

std::string format_comparison(const RuleComparison& r) {
  char buf[64];
  std::string out;
  std::snprintf(buf, sizeof buf, "%.1f", r.epsilon_ent);
  out += "epsilon_ent=" + std::string(buf) + "\n";
  std::snprintf(buf, sizeof buf, "%.1f", r.epsilon_cont);
  out += "epsilon_cont=" + std::string(buf) + "\n";
  out += "bench_rules=" + std::to_string(r.verdicts.size()) + "\n";
  out += "sys_rules=" + std::to_string(r.sys_rules) + "\n";
  out += "sys_skipped=" + std::to_string(r.sys_skipped) + "\n";
  out += "# entailed\tcontained\trule\n";
  for (const auto& v : r.verdicts) {
    out += std::string(v.entailed ? "yes" : "no") + "\t" + (v.contained ? "yes" : "no") + "\t" +
           v.rule + "\n";
  }
  return out;
}

}  // namespace inferbench
