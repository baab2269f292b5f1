#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "inferbench/kg.hpp"
#include "inferbench/rule.hpp"
#include "inferbench/triple_store.hpp"

namespace inferbench {

/// Binding value of a variable that has not been assigned yet.
inline constexpr ConstantId kUnbound{0xFFFFFFFEu};

/// A witness: one constant per rule variable, indexed like Rule::variables.
using Substitution = std::vector<ConstantId>;

/// Evaluation order for a rule body. Inequality atoms run as soon as both of
/// their terms are bound.
struct JoinPlan {
  struct Step {
    std::size_t atom = 0;
    std::vector<std::size_t> checks;  // inequality atoms decided after this step
  };
  std::vector<std::size_t> initial_checks;  // ground inequalities
  std::vector<Step> steps;
};

/// Greedy plan: repeatedly picks the inequality-free atom with the smallest
/// estimated match count given the variables bound so far (membership test,
/// index fan-out, or full predicate scan). `first`, if set, is forced first.
JoinPlan plan_join(const Rule& rule, const TripleStore& store,
                   std::optional<std::size_t> first = std::nullopt);

namespace detail {

template <class Callback>
class WitnessSearch {
 public:
  WitnessSearch(const Rule& rule, const TripleStore& store, const JoinPlan& plan,
                std::span<const FactWindow> windows, Callback& callback)
      : rule_(rule),
        store_(store),
        plan_(plan),
        windows_(windows),
        callback_(callback),
        binding_(rule.variable_count(), kUnbound) {}

  /// Returns false when the callback asked to stop.
  bool run() {
    if (!checks_pass(plan_.initial_checks)) return true;
    return step(0);
  }

  /// Number of witnesses, using posting-list sizes for the final step when
  /// that step cannot filter further.
  std::uint64_t count() {
    if (!checks_pass(plan_.initial_checks)) return 0;
    return count_step(0);
  }

 private:
  ConstantId value(const Term& t) const {
    return t.is_variable() ? binding_[t.var()] : t.constant_id();
  }

  FactWindow window(std::size_t atom) const {
    return windows_.empty() ? FactWindow{} : windows_[atom];
  }

  bool checks_pass(const std::vector<std::size_t>& checks) const {
    for (auto i : checks) {
      const auto& a = rule_.body[i];
      if (value(a.first) == value(a.second)) return false;
    }
    return true;
  }

  bool emit() {
    if constexpr (std::is_same_v<std::invoke_result_t<Callback&, std::span<const ConstantId>>,
                                 bool>) {
      return callback_(std::span<const ConstantId>(binding_));
    } else {
      callback_(std::span<const ConstantId>(binding_));
      return true;
    }
  }

  // Candidate facts for the atom at `depth` and whether each candidate still
  // needs per-fact filtering (repeated unbound variable).
  struct Candidates {
    std::span<const FactId> ids;
    bool single = false;  // fully bound: `hit` says whether the fact matched
    bool hit = false;
    bool filter_same = false;
  };

  Candidates candidates(const Atom& a, FactWindow w) const {
    Candidates c;
    const ConstantId s = value(a.first);
    if (a.kind == AtomKind::Type) {
      if (s != kUnbound) {
        c.single = true;
        auto id = store_.find(Triple::type(s, a.predicate));
        c.hit = id && w.contains(*id);
      } else {
        c.ids = TripleStore::restrict(store_.with_predicate(a.predicate), w);
      }
      return c;
    }
    const ConstantId o = value(a.second);
    if (s != kUnbound && o != kUnbound) {
      c.single = true;
      auto id = store_.find(Triple::relation(s, a.predicate, o));
      c.hit = id && w.contains(*id);
    } else if (s != kUnbound) {
      c.ids = TripleStore::restrict(store_.with_predicate_subject(a.predicate, s), w);
    } else if (o != kUnbound) {
      c.ids = TripleStore::restrict(store_.with_predicate_object(a.predicate, o), w);
    } else {
      c.ids = TripleStore::restrict(store_.with_predicate(a.predicate), w);
      c.filter_same = a.first.is_variable() && a.second.is_variable() &&
                      a.first.var() == a.second.var();
    }
    return c;
  }

  // Binds the unbound variables of `a` from `fact`; false if inconsistent.
  bool bind(const Atom& a, const Triple& fact, std::uint32_t (&bound)[2], int& n) {
    n = 0;
    auto assign = [&](const Term& t, ConstantId v) {
      if (!t.is_variable()) return t.constant_id() == v;
      auto& slot = binding_[t.var()];
      if (slot == kUnbound) {
        slot = v;
        bound[n++] = t.var();
        return true;
      }
      return slot == v;
    };
    if (!assign(a.first, fact.subject)) return false;
    if (a.kind != AtomKind::Type && !assign(a.second, fact.object)) return false;
    return true;
  }

  void unbind(const std::uint32_t (&bound)[2], int n) {
    for (int i = 0; i < n; ++i) binding_[bound[i]] = kUnbound;
  }

  bool step(std::size_t depth) {
    if (depth == plan_.steps.size()) return emit();
    const auto& st = plan_.steps[depth];
    const Atom& a = rule_.body[st.atom];
    const auto c = candidates(a, window(st.atom));
    if (c.single) {
      if (!c.hit || !checks_pass(st.checks)) return true;
      return step(depth + 1);
    }
    for (FactId id : c.ids) {
      const Triple& fact = store_.fact(id);
      std::uint32_t bound[2];
      int n = 0;
      const bool ok = bind(a, fact, bound, n) && checks_pass(st.checks);
      bool keep_going = true;
      if (ok) keep_going = step(depth + 1);
      unbind(bound, n);
      if (!keep_going) return false;
    }
    return true;
  }

  std::uint64_t count_step(std::size_t depth) {
    if (depth == plan_.steps.size()) return 1;
    const auto& st = plan_.steps[depth];
    const Atom& a = rule_.body[st.atom];
    const auto c = candidates(a, window(st.atom));
    if (c.single) {
      if (!c.hit || !checks_pass(st.checks)) return 0;
      return count_step(depth + 1);
    }
    // Distinct facts under one bound prefix give distinct substitutions, so
    // an unfiltered last step contributes its posting-list size.
    if (depth + 1 == plan_.steps.size() && st.checks.empty() && !c.filter_same) {
      return c.ids.size();
    }
    std::uint64_t total = 0;
    for (FactId id : c.ids) {
      const Triple& fact = store_.fact(id);
      std::uint32_t bound[2];
      int n = 0;
      if (bind(a, fact, bound, n) && checks_pass(st.checks)) total += count_step(depth + 1);
      unbind(bound, n);
    }
    return total;
  }

  const Rule& rule_;
  const TripleStore& store_;
  const JoinPlan& plan_;
  std::span<const FactWindow> windows_;
  Callback& callback_;
  std::vector<ConstantId> binding_;
};

}  // namespace detail

/// Calls `callback(std::span<const ConstantId>)` once per witness of the
/// rule body in `store`. A callback returning bool stops the search by
/// returning false. `windows`, when non-empty, restricts each body atom (by
/// index) to facts inside its window. Returns false iff stopped early.
template <class Callback>
bool for_each_witness(const Rule& rule, const TripleStore& store, Callback&& callback,
                      std::span<const FactWindow> windows = {},
                      const JoinPlan* plan = nullptr) {
  std::optional<JoinPlan> own;
  if (plan == nullptr) plan = &own.emplace(plan_join(rule, store));
  detail::WitnessSearch<std::remove_reference_t<Callback>> search(rule, store, *plan,
                                                                  windows, callback);
  return search.run();
}

/// All witnesses, sorted.
std::vector<Substitution> find_witnesses(const Rule& rule, const TripleStore& store);
inline std::vector<Substitution> find_witnesses(const Rule& rule, const KnowledgeGraph& kg) {
  return find_witnesses(rule, kg.store());
}

/// |support| = number of distinct witnesses.
std::uint64_t count_witnesses(const Rule& rule, const TripleStore& store);
inline std::uint64_t count_witnesses(const Rule& rule, const KnowledgeGraph& kg) {
  return count_witnesses(rule, kg.store());
}

/// One-step application T_r: heads of all witnesses, deduplicated and
/// sorted by id.
std::vector<Triple> apply_once(const Rule& rule, const TripleStore& store);
inline std::vector<Triple> apply_once(const Rule& rule, const KnowledgeGraph& kg) {
  return apply_once(rule, kg.store());
}

/// T_R: union over the rules, deduplicated and sorted by id.
std::vector<Triple> apply_once(std::span<const Rule> rules, const TripleStore& store);
inline std::vector<Triple> apply_once(std::span<const Rule> rules, const KnowledgeGraph& kg) {
  return apply_once(rules, kg.store());
}

/// Whether some witness of `rule` in `store` instantiates the head to `t`.
bool derives(const Rule& rule, const TripleStore& store, const Triple& t);

/// Least fixpoint M_R by semi-naive evaluation: each round only considers
/// witnesses that use at least one fact derived in the previous round. Facts
/// of the input keep their order; derived facts follow. If `goal` is given,
/// evaluation stops as soon as it is derived.
TripleStore materialise(std::span<const Rule> rules, std::span<const Triple> facts,
                        std::optional<Triple> goal = std::nullopt);
KnowledgeGraph materialise(std::span<const Rule> rules, const KnowledgeGraph& kg);

}  // namespace inferbench
