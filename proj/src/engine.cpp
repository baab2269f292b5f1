#include "inferbench/engine.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace inferbench {

JoinPlan plan_join(const Rule& rule, const TripleStore& store,
                   std::optional<std::size_t> first) {
  JoinPlan plan;
  std::vector<bool> bound(rule.variable_count(), false);
  auto is_bound = [&](const Term& t) { return !t.is_variable() || bound[t.var()]; };

  std::vector<std::size_t> remaining;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    const auto& a = rule.body[i];
    if (!a.is_inequality()) {
      remaining.push_back(i);
    } else if (is_bound(a.first) && is_bound(a.second)) {
      plan.initial_checks.push_back(i);
    } else {
      pending.push_back(i);
    }
  }

  auto estimate = [&](const Atom& a) -> double {
    const double n = static_cast<double>(store.with_predicate(a.predicate).size());
    const bool s = is_bound(a.first);
    if (a.kind == AtomKind::Type) return s ? 0.5 : n;
    const bool o = is_bound(a.second);
    if (s && o) return 0.5;
    if (s) return n / static_cast<double>(std::max<std::size_t>(1, store.distinct_subjects(a.predicate)));
    if (o) return n / static_cast<double>(std::max<std::size_t>(1, store.distinct_objects(a.predicate)));
    return n;
  };

  while (!remaining.empty()) {
    std::size_t pick = 0;
    if (first && plan.steps.empty()) {
      pick = static_cast<std::size_t>(
          std::find(remaining.begin(), remaining.end(), *first) - remaining.begin());
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        const double e = estimate(rule.body[remaining[k]]);
        if (e < best) {
          best = e;
          pick = k;
        }
      }
    }
    JoinPlan::Step step;
    step.atom = remaining[pick];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    const auto& a = rule.body[step.atom];
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (a.term(i).is_variable()) bound[a.term(i).var()] = true;
    }
    for (auto it = pending.begin(); it != pending.end();) {
      const auto& q = rule.body[*it];
      if (is_bound(q.first) && is_bound(q.second)) {
        step.checks.push_back(*it);
        it = pending.erase(it);
      } else {
        ++it;
      }
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

std::vector<Substitution> find_witnesses(const Rule& rule, const TripleStore& store) {
  std::vector<Substitution> out;
  for_each_witness(rule, store, [&](std::span<const ConstantId> b) {
    out.emplace_back(b.begin(), b.end());
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_witnesses(const Rule& rule, const TripleStore& store) {
  const JoinPlan plan = plan_join(rule, store);
  auto ignore = [](std::span<const ConstantId>) {};
  detail::WitnessSearch<decltype(ignore)> search(rule, store, plan, {}, ignore);
  return search.count();
}

namespace {

void collect_heads(const Rule& rule, const TripleStore& store,
                   std::unordered_set<Triple, TripleHash>& seen, std::vector<Triple>& out) {
  for_each_witness(rule, store, [&](std::span<const ConstantId> b) {
    const Triple t = ground(rule.head, b);
    if (seen.insert(t).second) out.push_back(t);
  });
}

}  // namespace

std::vector<Triple> apply_once(const Rule& rule, const TripleStore& store) {
  return apply_once(std::span<const Rule>(&rule, 1), store);
}

std::vector<Triple> apply_once(std::span<const Rule> rules, const TripleStore& store) {
  std::unordered_set<Triple, TripleHash> seen;
  std::vector<Triple> out;
  for (const auto& r : rules) collect_heads(r, store, seen, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool derives(const Rule& rule, const TripleStore& store, const Triple& t) {
  const auto& h = rule.head;
  if (t.is_type() != (h.kind == AtomKind::Type) || t.predicate != h.predicate) return false;
  Substitution fixed(rule.variable_count(), kUnbound);
  auto unify = [&](const Term& term, ConstantId c) {
    if (!term.is_variable()) return term.constant_id() == c;
    auto& slot = fixed[term.var()];
    if (slot != kUnbound && slot != c) return false;
    slot = c;
    return true;
  };
  if (!unify(h.first, t.subject)) return false;
  if (h.kind != AtomKind::Type && !unify(h.second, t.object)) return false;
  Rule bound = rule;
  auto pin = [&](Term& term) {
    if (term.is_variable() && fixed[term.var()] != kUnbound) {
      term = Term::constant(fixed[term.var()]);
    }
  };
  for (auto& a : bound.body) {
    pin(a.first);
    if (a.kind != AtomKind::Type) pin(a.second);
  }
  return !for_each_witness(bound, store, [](std::span<const ConstantId>) { return false; });
}

TripleStore materialise(std::span<const Rule> rules, std::span<const Triple> facts,
                        std::optional<Triple> goal) {
  TripleStore store;
  store.reserve(facts.size());
  for (const auto& t : facts) store.insert(t);
  if (goal && store.contains(*goal)) return store;

  auto delta_begin = FactId{0};
  auto delta_end = static_cast<FactId>(store.size());
  std::vector<FactWindow> windows;
  while (delta_begin < delta_end) {
    const FactWindow old_facts{0, delta_begin};
    const FactWindow delta{delta_begin, delta_end};
    const FactWindow all_facts{0, delta_end};
    std::unordered_set<Triple, TripleHash> fresh_seen;
    std::vector<Triple> fresh;
    bool reached = false;

    for (const auto& rule : rules) {
      windows.assign(rule.body.size(), all_facts);
      for (std::size_t i = 0; i < rule.body.size() && !reached; ++i) {
        const auto& pivot = rule.body[i];
        if (pivot.is_inequality()) continue;
        if (TripleStore::restrict(store.with_predicate(pivot.predicate), delta).empty()) continue;
        // Witnesses are split by their first delta atom: earlier atoms see
        // only old facts, later ones see everything.
        bool feasible = true;
        for (std::size_t j = 0; j < rule.body.size(); ++j) {
          if (rule.body[j].is_inequality()) continue;
          windows[j] = j < i ? old_facts : (j == i ? delta : all_facts);
          if (TripleStore::restrict(store.with_predicate(rule.body[j].predicate), windows[j])
                  .empty()) {
            feasible = false;
          }
        }
        if (!feasible) continue;
        const JoinPlan plan = plan_join(rule, store, i);
        for_each_witness(
            rule, store,
            [&](std::span<const ConstantId> b) {
              const Triple t = ground(rule.head, b);
              if (store.contains(t) || !fresh_seen.insert(t).second) return true;
              fresh.push_back(t);
              if (goal && t == *goal) {
                reached = true;
                return false;
              }
              return true;
            },
            windows, &plan);
      }
      if (reached) break;
    }
    for (const auto& t : fresh) store.insert(t);
    if (reached || fresh.empty()) break;
    delta_begin = delta_end;
    delta_end = static_cast<FactId>(store.size());
  }
  return store;
}

KnowledgeGraph materialise(std::span<const Rule> rules, const KnowledgeGraph& kg) {
  const TripleStore store = materialise(rules, kg.facts());
  return KnowledgeGraph(kg.symbols_ptr(), store.facts());
}

}  // namespace inferbench
