#include "inferbench/split.hpp"

#include <algorithm>
#include <charconv>

#include "inferbench/engine.hpp"
#include "inferbench/error.hpp"
#include "inferbench/parallel.hpp"

namespace inferbench {

SplitRatio SplitRatio::parse(std::string_view text) {
  std::uint32_t parts[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const auto end = i < 2 ? text.find(':', pos) : text.size();
    if (end == std::string_view::npos) break;
    auto field = text.substr(pos, end - pos);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), parts[i]);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
      throw Error(ErrorKind::Usage, "bad split ratio '" + std::string(text) + "'");
    }
    pos = end + 1;
    if (i == 2) {
      SplitRatio r{parts[0], parts[1], parts[2]};
      if (r.sum() == 0) throw Error(ErrorKind::Usage, "split ratio sums to zero");
      return r;
    }
  }
  throw Error(ErrorKind::Usage, "split ratio must look like a:b:c, got '" + std::string(text) + "'");
}

std::string SplitRatio::to_string() const {
  return std::to_string(train) + ":" + std::to_string(valid) + ":" + std::to_string(test);
}

SplitSizes split_sizes(std::size_t n, SplitRatio ratio) {
  const auto sum = static_cast<std::uint64_t>(ratio.sum());
  SplitSizes s;
  s.valid = static_cast<std::size_t>(n * static_cast<std::uint64_t>(ratio.valid) / sum);
  s.test = static_cast<std::size_t>(n * static_cast<std::uint64_t>(ratio.test) / sum);
  s.train = n - s.valid - s.test;
  return s;
}

std::vector<Triple> new_conclusions(const Rule& rule, const KnowledgeGraph& kg) {
  auto out = apply_once(rule, kg);
  std::erase_if(out, [&](const Triple& t) { return kg.contains(t); });
  sort_by_name(out, kg.symbols());
  return out;
}

std::vector<Triple> sample_conclusions(const Rule& rule, const KnowledgeGraph& kg,
                                       std::size_t k2, Rng& rng) {
  const auto pool = new_conclusions(rule, kg);
  return sample_without_replacement(std::span<const Triple>(pool), k2, rng);
}

PerRuleSplit split_per_rule(std::vector<Triple> sampled, SplitRatio ratio, Rng& rng) {
  shuffle(sampled, rng);
  const auto sizes = split_sizes(sampled.size(), ratio);
  PerRuleSplit out;
  auto it = sampled.begin();
  out.train.assign(it, it + static_cast<std::ptrdiff_t>(sizes.train));
  it += static_cast<std::ptrdiff_t>(sizes.train);
  out.valid.assign(it, it + static_cast<std::ptrdiff_t>(sizes.valid));
  it += static_cast<std::ptrdiff_t>(sizes.valid);
  out.test.assign(it, sampled.end());
  return out;
}

TripleSet PositiveSets::all() const {
  TripleSet out(train.begin(), train.end());
  out.insert(valid.begin(), valid.end());
  out.insert(test.begin(), test.end());
  return out;
}

PositiveSets assemble(const KnowledgeGraph& kg, std::span<const PerRuleSplit> splits) {
  PositiveSets out;
  TripleSet train(kg.facts().begin(), kg.facts().end());
  out.train.assign(kg.facts().begin(), kg.facts().end());
  for (const auto& s : splits) {
    for (const auto& t : s.train) {
      if (train.insert(t).second) out.train.push_back(t);
    }
  }
  TripleSet valid;
  for (const auto& s : splits) {
    for (const auto& t : s.valid) {
      if (!train.contains(t) && valid.insert(t).second) out.valid.push_back(t);
    }
  }
  TripleSet test;
  for (const auto& s : splits) {
    for (const auto& t : s.test) {
      if (!train.contains(t) && !valid.contains(t) && test.insert(t).second) {
        out.test.push_back(t);
      }
    }
  }
  for (const auto& s : splits) {
    for (const auto* part : {&s.train, &s.valid, &s.test}) {
      for (const auto& t : *part) out.provenance[t].push_back(s.rule);
    }
  }
  for (auto& [t, rules] : out.provenance) {
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  }
  sort_by_name(out.train, kg.symbols());
  sort_by_name(out.valid, kg.symbols());
  sort_by_name(out.test, kg.symbols());
  return out;
}

PositiveBuild build_positive_sets(const KnowledgeGraph& kg, std::span<const RankedRule> rules,
                                  std::size_t k2, SplitRatio ratio, std::uint64_t seed,
                                  unsigned workers) {
  if (k2 == 0) throw Error(ErrorKind::Usage, "k2 must be positive");
  PositiveBuild out;
  out.per_rule.resize(rules.size());
  parallel_for(rules.size(), workers, [&](std::size_t i) {
    const auto pool = new_conclusions(rules[i].rule, kg);
    auto rng = make_rng(seed, "split-builder/sample", rules[i].canonical);
    auto sampled = sample_without_replacement(std::span<const Triple>(pool), k2, rng);
    auto& split = out.per_rule[i];
    split = split_per_rule(std::move(sampled), ratio, rng);
    split.rule = i;
    split.available = pool.size();
  });
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (out.per_rule[i].available == 0) {
      out.warnings.push_back("rule derives nothing new: " + rules[i].canonical);
    }
  }
  out.positives = assemble(kg, out.per_rule);
  return out;
}

std::vector<Triple> unwitnessed(const PositiveSets& sets, std::span<const RankedRule> rules) {
  TripleStore train;
  train.reserve(sets.train.size());
  for (const auto& t : sets.train) train.insert(t);
  std::vector<Triple> out;
  for (const auto* part : {&sets.valid, &sets.test}) {
    for (const auto& t : *part) {
      bool ok = false;
      if (auto it = sets.provenance.find(t); it != sets.provenance.end()) {
        for (auto r : it->second) {
          if (derives(rules[r].rule, train, t)) {
            ok = true;
            break;
          }
        }
      }
      if (!ok) {
        for (const auto& r : rules) {
          if (derives(r.rule, train, t)) {
            ok = true;
            break;
          }
        }
      }
      if (!ok) out.push_back(t);
    }
  }
  return out;
}

namespace {

bool contained(const Signature& inner, const Signature& outer) {
  auto subset = [](const auto& a, const auto& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  return subset(inner.types, outer.types) && subset(inner.relations, outer.relations) &&
         subset(inner.constants, outer.constants);
}

}  // namespace

bool signature_contained(const PositiveSets& sets) {
  const auto train = signature(sets.train);
  return contained(signature(sets.valid), train) && contained(signature(sets.test), train);
}

}  // namespace inferbench
