#pragma once

// Independent checks of the negative-set invariants, shared by the unit
// tests and the acceptance binary. Every violation is returned as text.

#include <map>
#include <string>
#include <vector>

#include "inferbench/negatives.hpp"
#include "inferbench/pattern.hpp"
#include "inferbench/split.hpp"
#include "support.hpp"

namespace testing_support {

struct DeskBenchmark {
  std::shared_ptr<SymbolTable> symbols;
  std::shared_ptr<KnowledgeGraph> kg;
  std::vector<RankedRule> rules;
  PositiveSets positives;
};

/// A small random KG, rules from the built-in patterns, and positive sets.
inline DeskBenchmark desk_benchmark(std::uint64_t seed) {
  Rng rng(seed);
  DeskBenchmark b;
  b.symbols = fresh_symbols();
  const RandomShape shape{20, 4, 2};
  b.kg = std::make_shared<KnowledgeGraph>(
      kg_from(random_kg_text(rng, shape, 60 + static_cast<int>(uniform_below(rng, 100))), b.symbols));
  b.rules = select_rules(builtin_patterns(*b.symbols), *b.kg, 2, seed).rules;
  b.positives = build_positive_sets(*b.kg, b.rules, 20, SplitRatio{}, seed).positives;
  return b;
}

/// Rules obtained by deleting a non-empty proper subset of positive body
/// atoms (and inequalities that lose a variable), when safe.
inline std::vector<Rule> oracle_subrules(const Rule& r) {
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (!r.body[i].is_inequality()) positive.push_back(i);
  }
  std::vector<Rule> out;
  const auto m = positive.size();
  for (std::uint32_t keep = 1; keep + 1 < (1u << m); ++keep) {
    Rule sub = r;
    sub.body.clear();
    std::set<std::uint32_t> vars;
    for (std::size_t k = 0; k < m; ++k) {
      if (!(keep & (1u << k))) continue;
      const auto& a = r.body[positive[k]];
      sub.body.push_back(a);
      for (std::size_t j = 0; j < a.arity(); ++j) {
        if (a.term(j).is_variable()) vars.insert(a.term(j).var());
      }
    }
    auto has = [&](const Term& t) { return !t.is_variable() || vars.contains(t.var()); };
    for (const auto& a : r.body) {
      if (a.is_inequality() && has(a.first) && has(a.second)) sub.body.push_back(a);
    }
    if (!has(sub.head.first) || (sub.head.kind != AtomKind::Type && !has(sub.head.second))) continue;
    out.push_back(sub);
  }
  return out;
}

/// Drops variables the rule no longer mentions.
inline Rule compact(const Rule& r) {
  Rule copy = r;
  std::vector<std::uint32_t> map(r.variable_count(), 0xFFFFFFFFu);
  std::vector<std::string> names;
  auto fix = [&](Term& t) {
    if (!t.is_variable()) return;
    if (map[t.var()] == 0xFFFFFFFFu) {
      map[t.var()] = static_cast<std::uint32_t>(names.size());
      names.push_back(r.variables[t.var()]);
    }
    t = Term::variable(map[t.var()]);
  };
  for (auto& a : copy.body) {
    fix(a.first);
    if (a.kind != AtomKind::Type) fix(a.second);
  }
  fix(copy.head.first);
  if (copy.head.kind != AtomKind::Type) fix(copy.head.second);
  copy.variables = names;
  return copy;
}

struct NegativeCheck {
  std::vector<std::string> violations;
  std::size_t checked = 0;
  void fail(std::string what) { violations.push_back(std::move(what)); }
};

inline void check_negatives(const DeskBenchmark& b, const NegativeSets& neg, NegativeCheck& out) {
  const auto& symbols = *b.symbols;
  const auto p_all = b.positives.all();
  const FactSet k(b.kg->facts().begin(), b.kg->facts().end());
  auto show = [&](const Triple& t) { return format_triple(t, symbols); };

  // Balance and disjointness.
  std::map<Triple, std::string> seen;
  for (auto s : kSplits) {
    const auto& pos = positives_of(b.positives, s);
    const auto& set = neg[s];
    ++out.checked;
    if (set.size() != pos.size() && !(neg.shortfall && set.size() < pos.size())) {
      out.fail(std::string(split_name(s)) + ": " + std::to_string(set.size()) + " negatives for " +
               std::to_string(pos.size()) + " positives");
    }
    if (set.tags.size() != set.triples.size()) out.fail("tags misaligned");
    for (const auto& t : set.triples) {
      ++out.checked;
      if (p_all.contains(t)) out.fail("negative is a positive: " + show(t));
      auto [it, fresh] = seen.emplace(t, std::string(split_name(s)));
      if (!fresh) out.fail("negative repeated in " + it->second + " and " + std::string(split_name(s)));
    }
  }

  if (neg.method == NegativeMethod::Rc) {
    // Object corruption keeps (s, R), so each (s, R) group (or type T for
    // type triples) is filled independently: the total number of negatives
    // is the sum over groups of min(positives, free slots).
    std::set<std::uint32_t> consts;
    for (const auto& t : k) {
      consts.insert(index_of(t.subject));
      if (!t.is_type()) consts.insert(index_of(t.object));
    }
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> wanted, taken;
    auto group = [](const Triple& t) {
      return std::pair{t.is_type() ? ~0u : index_of(t.subject), index_of(t.predicate)};
    };
    for (auto sk : kSplits) {
      for (const auto& t : positives_of(b.positives, sk)) ++wanted[group(t)];
    }
    for (const auto& t : p_all) ++taken[group(t)];
    std::size_t expected = 0, total = 0;
    for (const auto& [g, n] : wanted) expected += std::min(n, consts.size() - taken[g]);
    for (auto sk : kSplits) {
      const auto& set = neg[sk];
      total += set.size();
      std::set<std::pair<std::uint32_t, std::uint32_t>> groups;
      for (const auto& t : positives_of(b.positives, sk)) groups.insert(group(t));
      for (const auto& t : set.triples) {
        ++out.checked;
        if (!groups.contains(group(t))) out.fail("rc negative corrupts the wrong slot: " + show(t));
      }
    }
    if (total != expected) {
      out.fail("rc produced " + std::to_string(total) + " negatives, free slots allow " +
               std::to_string(expected));
    }
    return;
  }
  if (neg.method == NegativeMethod::Rb) {
    std::set<std::uint32_t> heads;
    for (const auto& r : b.rules) heads.insert(index_of(r.rule.head.predicate));
    for (auto sk : kSplits) {
      for (const auto& t : neg[sk].triples) {
        ++out.checked;
        if (!heads.contains(index_of(t.predicate))) out.fail("rb negative outside Pred_R: " + show(t));
      }
    }
    return;
  }

  // C_x and the position-aware corruption pools, from scratch.
  FactSet derived;
  for (const auto& r : b.rules) {
    const auto h = brute_apply(r.rule, k);
    derived.insert(h.begin(), h.end());
  }
  std::map<std::uint32_t, std::set<std::uint32_t>> subj, obj;
  std::set<std::uint32_t> typed;
  for (const auto& t : p_all) {
    if (t.is_type()) {
      typed.insert(index_of(t.subject));
    } else {
      subj[index_of(t.predicate)].insert(index_of(t.subject));
      obj[index_of(t.predicate)].insert(index_of(t.object));
    }
  }
  auto in_pool = [&](const Triple& n, const std::vector<Triple>& conclusions) {
    for (const auto& c : conclusions) {
      if (c.predicate != n.predicate || c.is_type() != n.is_type()) continue;
      if (c.is_type()) {
        if (typed.contains(index_of(n.subject))) return true;
        continue;
      }
      if (c.object == n.object && subj[index_of(c.predicate)].contains(index_of(n.subject))) {
        return true;
      }
      if (c.subject == n.subject && obj[index_of(c.predicate)].contains(index_of(n.object))) {
        return true;
      }
    }
    return false;
  };
  std::vector<Triple> c_train;
  for (const auto& t : b.positives.train) {
    if (derived.contains(t)) c_train.push_back(t);
  }
  const std::vector<Triple>* conclusions[] = {&c_train, &b.positives.valid, &b.positives.test};

  FactSet subrule_heads;
  std::size_t complex = 0;
  if (neg.method == NegativeMethod::Qg) {
    // A sub-rule that is itself a member of R is not an over-general rule.
    std::set<std::string> originals;
    for (const auto& r : b.rules) originals.insert(canonical_text(r.rule, symbols));
    for (const auto& r : b.rules) {
      const auto subs = oracle_subrules(r.rule);
      bool any = false;
      for (const auto& sub : subs) {
        const auto c = compact(sub);
        if (!is_safe(c) || originals.contains(canonical_text(c, symbols))) continue;
        any = true;
        const auto h = brute_apply(c, k);
        subrule_heads.insert(h.begin(), h.end());
      }
      complex += any;
    }
  }

  for (auto s : kSplits) {
    const auto& set = neg[s];
    std::size_t subrule_count = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& t = set.triples[i];
      ++out.checked;
      if (set.tags[i] == "pa") {
        if (!in_pool(t, *conclusions[static_cast<int>(s)])) {
          out.fail(std::string(split_name(s)) + ": pa negative outside C': " + show(t));
        }
      } else if (set.tags[i] == "subrule") {
        ++subrule_count;
        if (!subrule_heads.contains(t)) {
          out.fail(std::string(split_name(s)) + ": sub-rule negative outside T_R-(K): " + show(t));
        }
      } else {
        out.fail("unexpected tag " + set.tags[i]);
      }
    }
    if (neg.method == NegativeMethod::Qg && !b.rules.empty()) {
      const auto needed = positives_of(b.positives, s).size();
      const auto ceil_quota = (complex * needed + b.rules.size() - 1) / b.rules.size();
      std::size_t pool = 0;
      const auto key = "qg." + std::string(split_name(s)) + ".pool";
      for (const auto& [k2, v] : neg.notes) {
        if (k2 == key) pool = std::stoul(v);
      }
      ++out.checked;
      if (subrule_count != std::min(ceil_quota, pool)) {
        out.fail(std::string(split_name(s)) + ": " + std::to_string(subrule_count) +
                 " sub-rule negatives, quota min(" + std::to_string(ceil_quota) + ", " +
                 std::to_string(pool) + ")");
      }
      FactSet available;
      for (const auto& t : subrule_heads) {
        if (!p_all.contains(t)) available.insert(t);
      }
      if (pool > available.size()) out.fail("sub-rule pool larger than T_R-(K) minus P_all");
    }
  }
}

}  // namespace testing_support
