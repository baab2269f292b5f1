#include "inferbench/negatives.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "inferbench/engine.hpp"
#include "inferbench/error.hpp"
#include "inferbench/parallel.hpp"

namespace inferbench {

NegativeMethod parse_method(std::string_view name) {
  if (name == "rc") return NegativeMethod::Rc;
  if (name == "rb") return NegativeMethod::Rb;
  if (name == "pa") return NegativeMethod::Pa;
  if (name == "qg") return NegativeMethod::Qg;
  throw Error(ErrorKind::Usage, "unknown negative method '" + std::string(name) +
                                    "' (expected rc, rb, pa or qg)");
}

std::string_view method_name(NegativeMethod m) {
  switch (m) {
    case NegativeMethod::Rc: return "rc";
    case NegativeMethod::Rb: return "rb";
    case NegativeMethod::Pa: return "pa";
    case NegativeMethod::Qg: return "qg";
  }
  return "?";
}

std::string_view split_name(SplitKind s) {
  switch (s) {
    case SplitKind::Train: return "train";
    case SplitKind::Valid: return "valid";
    case SplitKind::Test: return "test";
  }
  return "?";
}

void NegativeSet::add(const Triple& t, std::string_view tag) {
  triples.push_back(t);
  tags.emplace_back(tag);
}

NegativeSet& NegativeSets::operator[](SplitKind s) {
  return s == SplitKind::Train ? train : s == SplitKind::Valid ? valid : test;
}

const NegativeSet& NegativeSets::operator[](SplitKind s) const {
  return s == SplitKind::Train ? train : s == SplitKind::Valid ? valid : test;
}

const std::vector<Triple>& positives_of(const PositiveSets& p, SplitKind s) {
  return s == SplitKind::Train ? p.train : s == SplitKind::Valid ? p.valid : p.test;
}

const std::vector<Triple>& ConclusionSets::operator[](SplitKind s) const {
  return s == SplitKind::Train ? train : s == SplitKind::Valid ? valid : test;
}

namespace {

std::string item(SplitKind s) { return std::string(split_name(s)); }

// Records a shortfall or throws, depending on the policy.
void check_balance(NegativeSets& out, const NegativeConfig& config, SplitKind s,
                   std::size_t needed, std::size_t got) {
  if (got >= needed) return;
  const auto message = std::string(method_name(out.method)) + ": " +
                       std::string(split_name(s)) + " needs " + std::to_string(needed) +
                       " negatives but only " + std::to_string(got) + " are available";
  if (!config.allow_shortfall) throw ShortfallError(message);
  out.shortfall = true;
  out.warnings.push_back(message);
}

// Puts each set (with its tags) in name order.
void finish(NegativeSets& out, const SymbolTable& symbols) {
  const NameOrder order(symbols);
  auto key = [&](const Triple& t) {
    return std::tuple(order.rank(t.subject), t.is_type(), order.rank(t.predicate),
                      t.is_type() ? 0u : order.rank(t.object));
  };
  for (auto s : kSplits) {
    auto& set = out[s];
    std::vector<std::size_t> idx(set.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return key(set.triples[a]) < key(set.triples[b]);
    });
    NegativeSet sorted;
    for (auto i : idx) sorted.add(set.triples[i], set.tags[i]);
    set = std::move(sorted);
  }
}

std::vector<ConstantId> constants_by_name(const KnowledgeGraph& kg) {
  auto consts = signature(kg).constants;
  const auto& symbols = kg.symbols();
  const NameOrder order(symbols);
  std::sort(consts.begin(), consts.end(),
            [&](ConstantId a, ConstantId b) { return order.rank(a) < order.rank(b); });
  return consts;
}

std::vector<Triple> listed_sample(std::vector<Triple> members, const TripleSet& exclude,
                                  std::size_t count, Rng& rng, const SymbolTable& symbols) {
  std::erase_if(members, [&](const Triple& t) { return exclude.contains(t); });
  sort_by_name(members, symbols);
  return sample_without_replacement(std::span<const Triple>(members), count, rng);
}

// T_R(K) as a set, rules applied in parallel.
TripleSet one_step(std::span<const Rule> rules, const KnowledgeGraph& kg, unsigned workers) {
  std::vector<std::vector<Triple>> parts(rules.size());
  parallel_for(rules.size(), workers, [&](std::size_t i) { parts[i] = apply_once(rules[i], kg); });
  TripleSet out;
  for (const auto& p : parts) out.insert(p.begin(), p.end());
  return out;
}

std::vector<Rule> rules_only(std::span<const RankedRule> rules) {
  std::vector<Rule> out;
  out.reserve(rules.size());
  for (const auto& r : rules) out.push_back(r.rule);
  return out;
}

}  // namespace

NegativeSets gen_rc(const PositiveSets& positives, const KnowledgeGraph& kg,
                    const NegativeConfig& config) {
  const auto consts = constants_by_name(kg);
  NegativeSets out;
  out.method = NegativeMethod::Rc;
  const auto p_all = positives.all();
  TripleSet used;
  for (auto s : kSplits) {
    auto rng = make_rng(config.seed, "negatives/rc", item(s));
    const auto& pos = positives_of(positives, s);
    auto& set = out[s];
    for (const auto& t : pos) {
      auto corrupt = [&](ConstantId c) {
        return t.is_type() ? Triple::type(c, t.predicate)
                           : Triple::relation(t.subject, t.predicate, c);
      };
      auto fresh = [&](const Triple& c) { return !p_all.contains(c) && !used.contains(c); };
      if (consts.empty()) break;
      std::optional<Triple> pick;
      for (int attempt = 0; attempt < 32 && !pick; ++attempt) {
        auto c = corrupt(consts[uniform_below(rng, consts.size())]);
        if (fresh(c)) pick = c;
      }
      if (!pick) {
        const auto start = uniform_below(rng, consts.size());
        for (std::size_t k = 0; k < consts.size() && !pick; ++k) {
          auto c = corrupt(consts[(start + k) % consts.size()]);
          if (fresh(c)) pick = c;
        }
      }
      if (!pick) continue;
      used.insert(*pick);
      set.add(*pick, "rc");
    }
    check_balance(out, config, s, pos.size(), set.size());
  }
  finish(out, kg.symbols());
  return out;
}

RelevancePool RelevancePool::build(std::span<const RankedRule> rules, const KnowledgeGraph& kg,
                                   unsigned workers) {
  RelevancePool pool;
  const auto& symbols = kg.symbols();
  const NameOrder order(symbols);
  for (const auto& r : rules) {
    auto& list = r.rule.head.kind == AtomKind::Type ? pool.types : pool.relations;
    if (std::find(list.begin(), list.end(), r.rule.head.predicate) == list.end()) {
      list.push_back(r.rule.head.predicate);
    }
  }
  auto by_name = [&](PredicateId a, PredicateId b) { return order.rank(a) < order.rank(b); };
  std::sort(pool.relations.begin(), pool.relations.end(), by_name);
  std::sort(pool.types.begin(), pool.types.end(), by_name);

  const auto n = symbols.constant_count();
  std::vector<std::vector<char>> marks(rules.size());
  parallel_for(rules.size(), workers, [&](std::size_t i) {
    auto& mark = marks[i];
    mark.assign(n, 0);
    for_each_witness(rules[i].rule, kg.store(), [&](std::span<const ConstantId> b) {
      for (auto c : b) mark[index_of(c)] = 1;
    });
  });
  for (std::uint32_t c = 0; c < n; ++c) {
    if (std::any_of(marks.begin(), marks.end(), [&](const auto& m) { return m[c] != 0; })) {
      pool.constants.push_back(ConstantId{c});
    }
  }
  std::sort(pool.constants.begin(), pool.constants.end(),
            [&](ConstantId a, ConstantId b) { return order.rank(a) < order.rank(b); });
  return pool;
}

std::uint64_t RelevancePool::size() const {
  const std::uint64_t c = constants.size();
  return relations.size() * c * c + types.size() * c;
}

Triple RelevancePool::at(std::uint64_t i) const {
  const std::uint64_t c = constants.size();
  const std::uint64_t rel = relations.size() * c * c;
  if (i < rel) {
    const auto r = i / (c * c);
    const auto rest = i % (c * c);
    return Triple::relation(constants[rest / c], relations[r], constants[rest % c]);
  }
  i -= rel;
  return Triple::type(constants[i % c], types[i / c]);
}

bool RelevancePool::contains(const Triple& t) const {
  auto has = [](const auto& list, auto x) {
    return std::find(list.begin(), list.end(), x) != list.end();
  };
  if (t.is_type()) return has(types, t.predicate) && has(constants, t.subject);
  return has(relations, t.predicate) && has(constants, t.subject) && has(constants, t.object);
}

NegativeSets gen_rb(const PositiveSets& positives, std::span<const RankedRule> rules,
                    const KnowledgeGraph& kg, const NegativeConfig& config) {
  if (rules.empty()) throw Error(ErrorKind::Data, "rb needs at least one rule");
  NegativeSets out;
  out.method = NegativeMethod::Rb;
  const auto pool = RelevancePool::build(rules, kg, config.workers);
  const auto p_all = positives.all();

  // Exact pool size: membership in N_cand is checked per positive.
  std::vector<ConstantId> sorted_consts = pool.constants;
  std::sort(sorted_consts.begin(), sorted_consts.end());
  auto in_pool = [&](const Triple& t) {
    auto has_const = [&](ConstantId c) {
      return std::binary_search(sorted_consts.begin(), sorted_consts.end(), c);
    };
    const auto& preds = t.is_type() ? pool.types : pool.relations;
    if (std::find(preds.begin(), preds.end(), t.predicate) == preds.end()) return false;
    return has_const(t.subject) && (t.is_type() || has_const(t.object));
  };
  std::uint64_t taken = 0;
  for (const auto& t : p_all) taken += in_pool(t) ? 1 : 0;
  const std::uint64_t available = pool.size() - taken;
  out.notes.emplace_back("rb.pred_r", std::to_string(pool.relations.size() + pool.types.size()));
  out.notes.emplace_back("rb.const_sup", std::to_string(pool.constants.size()));
  out.notes.emplace_back("rb.n_cand", std::to_string(pool.size()));
  out.notes.emplace_back("rb.available", std::to_string(available));

  std::size_t needed[3];
  std::uint64_t total = 0;
  for (auto s : kSplits) {
    needed[static_cast<int>(s)] = positives_of(positives, s).size();
    total += needed[static_cast<int>(s)];
  }
  std::size_t target[3] = {needed[0], needed[1], needed[2]};
  if (available < total && config.allow_shortfall) {
    // Scale every split down by the same factor; leftovers go to train.
    std::uint64_t given = 0;
    for (int i = 0; i < 3; ++i) {
      target[i] = static_cast<std::size_t>(needed[i] * available / total);
      given += target[i];
    }
    for (int i = 0; i < 3 && given < available; ++i) {
      const auto extra = std::min<std::uint64_t>(needed[i] - target[i], available - given);
      target[i] += static_cast<std::size_t>(extra);
      given += extra;
    }
  }

  auto rng = make_rng(config.seed, "negatives/rb");
  TripleSet chosen;
  const bool listed = pool.size() <= PositionAwarePool::kExplicitLimit || available < 2 * total;
  std::vector<Triple> members;
  if (listed) {
    for (std::uint64_t i = 0; i < pool.size(); ++i) {
      const auto t = pool.at(i);
      if (!p_all.contains(t)) members.push_back(t);
    }
  }
  for (auto s : kSplits) {
    const auto want = target[static_cast<int>(s)];
    auto& set = out[s];
    if (listed) {
      for (const auto& t : listed_sample(members, chosen, want, rng, kg.symbols())) {
        chosen.insert(t);
        set.add(t, "rb");
      }
    } else {
      while (set.size() < want) {
        const auto t = pool.at(uniform_below(rng, pool.size()));
        if (p_all.contains(t) || !chosen.insert(t).second) continue;
        set.add(t, "rb");
      }
    }
    check_balance(out, config, s, needed[static_cast<int>(s)], set.size());
  }
  finish(out, kg.symbols());
  return out;
}

CorruptionContext::CorruptionContext(const TripleSet& p_all, const SymbolTable& symbols)
    : p_all_(p_all) {
  for (const auto& t : p_all) {
    if (t.is_type()) {
      typed_members_.by_id.push_back(t.subject);
    } else {
      subjects_[index_of(t.predicate)].by_id.push_back(t.subject);
      objects_[index_of(t.predicate)].by_id.push_back(t.object);
    }
  }
  const NameOrder order(symbols);
  normalise(typed_members_, order);
  for (auto& [p, m] : subjects_) normalise(m, order);
  for (auto& [p, m] : objects_) normalise(m, order);
}

void CorruptionContext::normalise(Members& m, const NameOrder& order) {
  std::sort(m.by_id.begin(), m.by_id.end());
  m.by_id.erase(std::unique(m.by_id.begin(), m.by_id.end()), m.by_id.end());
  m.by_name = m.by_id;
  std::sort(m.by_name.begin(), m.by_name.end(),
            [&](ConstantId a, ConstantId b) { return order.rank(a) < order.rank(b); });
}

bool CorruptionContext::has(const Members& m, ConstantId c) {
  return std::binary_search(m.by_id.begin(), m.by_id.end(), c);
}

std::span<const ConstantId> CorruptionContext::subjects(PredicateId r) const {
  auto it = subjects_.find(index_of(r));
  return it == subjects_.end() ? std::span<const ConstantId>{} : it->second.by_name;
}

std::span<const ConstantId> CorruptionContext::objects(PredicateId r) const {
  auto it = objects_.find(index_of(r));
  return it == objects_.end() ? std::span<const ConstantId>{} : it->second.by_name;
}

bool CorruptionContext::is_subject(PredicateId r, ConstantId c) const {
  auto it = subjects_.find(index_of(r));
  return it != subjects_.end() && has(it->second, c);
}

bool CorruptionContext::is_object(PredicateId r, ConstantId c) const {
  auto it = objects_.find(index_of(r));
  return it != objects_.end() && has(it->second, c);
}

bool CorruptionContext::is_typed(ConstantId c) const { return has(typed_members_, c); }

PositionAwarePool::PositionAwarePool(std::span<const Triple> conclusions,
                                     const CorruptionContext& context)
    : context_(context), conclusions_(conclusions.begin(), conclusions.end()) {
  prefix_.reserve(conclusions_.size() + 1);
  prefix_.push_back(0);
  for (const auto& c : conclusions_) {
    index_.insert(c);
    total_ += c.is_type()
                  ? context_.typed().size()
                  : context_.subjects(c.predicate).size() + context_.objects(c.predicate).size();
    prefix_.push_back(total_);
  }
}

std::uint64_t PositionAwarePool::multiplicity(const Triple& t) const {
  if (t.is_type()) {
    return context_.is_typed(t.subject) ? index_.with_predicate(t.predicate).size() : 0;
  }
  std::uint64_t m = 0;
  if (context_.is_subject(t.predicate, t.subject)) {
    m += index_.with_predicate_object(t.predicate, t.object).size();
  }
  if (context_.is_object(t.predicate, t.object)) {
    m += index_.with_predicate_subject(t.predicate, t.subject).size();
  }
  return m;
}

bool PositionAwarePool::contains(const Triple& t) const {
  return !context_.p_all().contains(t) && multiplicity(t) > 0;
}

Triple PositionAwarePool::generate(std::uint64_t g) const {
  const auto i = static_cast<std::size_t>(
      std::upper_bound(prefix_.begin(), prefix_.end(), g) - prefix_.begin() - 1);
  const auto k = static_cast<std::size_t>(g - prefix_[i]);
  const auto& c = conclusions_[i];
  if (c.is_type()) return Triple::type(context_.typed()[k], c.predicate);
  const auto subjects = context_.subjects(c.predicate);
  if (k < subjects.size()) return Triple::relation(subjects[k], c.predicate, c.object);
  return Triple::relation(c.subject, c.predicate, context_.objects(c.predicate)[k - subjects.size()]);
}

std::vector<Triple> PositionAwarePool::enumerate() const {
  TripleSet seen;
  for (std::uint64_t g = 0; g < total_; ++g) {
    const auto t = generate(g);
    if (!context_.p_all().contains(t)) seen.insert(t);
  }
  std::vector<Triple> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Triple> PositionAwarePool::sample_listed(std::size_t count, const TripleSet& exclude,
                                                     Rng& rng, const SymbolTable& symbols) const {
  return listed_sample(enumerate(), exclude, count, rng, symbols);
}

std::vector<Triple> PositionAwarePool::sample(std::size_t count, const TripleSet& exclude,
                                              Rng& rng, const SymbolTable& symbols) const {
  if (count == 0 || total_ == 0) return {};
  if (total_ <= kExplicitLimit) return sample_listed(count, exclude, rng, symbols);
  // Draw a (conclusion, replacement) pair uniformly and accept its triple
  // with probability 1/multiplicity: every member is then equally likely.
  std::vector<Triple> out;
  TripleSet picked;
  const std::uint64_t budget = 64 * static_cast<std::uint64_t>(count) + 100000;
  for (std::uint64_t attempts = 0; out.size() < count; ++attempts) {
    if (attempts == budget) {
      TripleSet blocked = exclude;
      blocked.insert(picked.begin(), picked.end());
      auto rest = sample_listed(count - out.size(), blocked, rng, symbols);
      out.insert(out.end(), rest.begin(), rest.end());
      break;
    }
    const auto t = generate(uniform_below(rng, total_));
    if (context_.p_all().contains(t) || exclude.contains(t) || picked.contains(t)) continue;
    const auto m = multiplicity(t);
    if (m > 1 && uniform_below(rng, m) != 0) continue;
    picked.insert(t);
    out.push_back(t);
  }
  return out;
}

ConclusionSets conclusion_sets(const PositiveSets& positives, std::span<const RankedRule> rules,
                               const KnowledgeGraph& kg, unsigned workers) {
  const auto plain = rules_only(rules);
  const auto derived = one_step(plain, kg, workers);
  ConclusionSets out;
  for (const auto& t : positives.train) {
    if (derived.contains(t)) out.train.push_back(t);
  }
  out.valid = positives.valid;
  out.test = positives.test;
  return out;
}

namespace {

struct PaState {
  TripleSet p_all;
  CorruptionContext context;
  ConclusionSets conclusions;

  PaState(const PositiveSets& positives, std::span<const RankedRule> rules,
          const KnowledgeGraph& kg, unsigned workers)
      : p_all(positives.all()),
        context(p_all, kg.symbols()),
        conclusions(conclusion_sets(positives, rules, kg, workers)) {}
};

void fill_from_pa(NegativeSets& out, const PaState& state, SplitKind s, std::size_t count,
                  TripleSet& chosen, const NegativeConfig& config, const SymbolTable& symbols) {
  const PositionAwarePool pool(state.conclusions[s], state.context);
  auto rng = make_rng(config.seed, "negatives/pa", item(s));
  out.notes.emplace_back("pa." + item(s) + ".conclusions",
                         std::to_string(state.conclusions[s].size()));
  out.notes.emplace_back("pa." + item(s) + ".generators", std::to_string(pool.generator_count()));
  for (const auto& t : pool.sample(count, chosen, rng, symbols)) {
    chosen.insert(t);
    out[s].add(t, "pa");
  }
}

}  // namespace

NegativeSets gen_pa(const PositiveSets& positives, std::span<const RankedRule> rules,
                    const KnowledgeGraph& kg, const NegativeConfig& config) {
  NegativeSets out;
  out.method = NegativeMethod::Pa;
  const PaState state(positives, rules, kg, config.workers);
  TripleSet chosen;
  for (auto s : kSplits) {
    const auto needed = positives_of(positives, s).size();
    fill_from_pa(out, state, s, needed, chosen, config, kg.symbols());
    check_balance(out, config, s, needed, out[s].size());
  }
  finish(out, kg.symbols());
  return out;
}

namespace {

// Renumbers variables densely in order of first use, dropping unused ones.
void compact_variables(Rule& rule) {
  std::vector<std::uint32_t> map(rule.variable_count(), 0xFFFFFFFFu);
  std::vector<std::string> names;
  auto fix = [&](Term& t) {
    if (!t.is_variable()) return;
    auto& m = map[t.var()];
    if (m == 0xFFFFFFFFu) {
      m = static_cast<std::uint32_t>(names.size());
      names.push_back(rule.variables[t.var()]);
    }
    t = Term::variable(m);
  };
  for (auto& a : rule.body) {
    fix(a.first);
    if (a.kind != AtomKind::Type) fix(a.second);
  }
  fix(rule.head.first);
  if (rule.head.kind != AtomKind::Type) fix(rule.head.second);
  rule.variables = std::move(names);
}

}  // namespace

SubRules derive_subrules(std::span<const Rule> rules, const SymbolTable& symbols) {
  std::unordered_set<std::string> originals;
  for (const auto& r : rules) originals.insert(canonical_text(r, symbols));
  SubRules out;
  std::vector<std::pair<std::string, Rule>> found;
  std::unordered_set<std::string> seen;
  for (std::size_t ri = 0; ri < rules.size(); ++ri) {
    const auto& r = rules[ri];
    std::vector<std::size_t> positive;
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (!r.body[i].is_inequality()) positive.push_back(i);
    }
    const auto m = positive.size();
    if (m < 2) continue;
    if (m > 20) throw Error(ErrorKind::Data, "rule body too long for sub-rule enumeration");
    bool contributes = false;
    for (std::uint32_t drop = 1; drop + 1 < (1u << m); ++drop) {
      Rule sub;
      sub.head = r.head;
      sub.variables = r.variables;
      std::vector<bool> bound(r.variable_count(), false);
      for (std::size_t k = 0; k < m; ++k) {
        if (drop & (1u << k)) continue;
        const auto& a = r.body[positive[k]];
        sub.body.push_back(a);
        for (std::size_t j = 0; j < a.arity(); ++j) {
          if (a.term(j).is_variable()) bound[a.term(j).var()] = true;
        }
      }
      auto covered = [&](const Term& t) { return !t.is_variable() || bound[t.var()]; };
      for (const auto& a : r.body) {
        if (a.is_inequality() && covered(a.first) && covered(a.second)) sub.body.push_back(a);
      }
      if (!covered(sub.head.first) ||
          (sub.head.kind != AtomKind::Type && !covered(sub.head.second))) {
        continue;
      }
      compact_variables(sub);
      if (!is_safe(sub)) continue;
      auto text = canonical_text(sub, symbols);
      if (originals.contains(text)) continue;
      contributes = true;
      if (seen.insert(text).second) found.emplace_back(std::move(text), std::move(sub));
    }
    if (contributes) out.complex.push_back(ri);
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [text, rule] : found) out.rules.push_back(std::move(rule));
  return out;
}

SubRules derive_subrules(std::span<const RankedRule> rules, const SymbolTable& symbols) {
  const auto plain = rules_only(rules);
  return derive_subrules(std::span<const Rule>(plain), symbols);
}

std::size_t subrule_quota(std::size_t complex, std::size_t total, std::size_t needed) {
  if (total == 0) return 0;
  const auto num = static_cast<std::uint64_t>(complex) * needed;
  return static_cast<std::size_t>((num + total - 1) / total);
}

NegativeSets gen_qg(const PositiveSets& positives, std::span<const RankedRule> rules,
                    const KnowledgeGraph& kg, const NegativeConfig& config) {
  NegativeSets out;
  out.method = NegativeMethod::Qg;
  const PaState state(positives, rules, kg, config.workers);
  const auto sub = derive_subrules(rules, kg.symbols());
  if (sub.complex.empty()) {
    out.warnings.push_back("qg: no rule has sub-rules, so every negative comes from pa");
  }

  std::vector<Triple> pool;
  for (const auto& t : one_step(sub.rules, kg, config.workers)) {
    if (!state.p_all.contains(t)) pool.push_back(t);
  }
  sort_by_name(pool, kg.symbols());
  auto split_rng = make_rng(config.seed, "negatives/qg-pool");
  shuffle(pool, split_rng);
  const auto sizes = split_sizes(pool.size(), config.ratio);
  std::vector<Triple> parts[3];
  parts[0].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(sizes.train));
  parts[1].assign(pool.begin() + static_cast<std::ptrdiff_t>(sizes.train),
                  pool.begin() + static_cast<std::ptrdiff_t>(sizes.train + sizes.valid));
  parts[2].assign(pool.begin() + static_cast<std::ptrdiff_t>(sizes.train + sizes.valid),
                  pool.end());

  out.notes.emplace_back("qg.subrules", std::to_string(sub.rules.size()));
  out.notes.emplace_back("qg.complex", std::to_string(sub.complex.size()));
  out.notes.emplace_back("qg.rules", std::to_string(rules.size()));
  out.notes.emplace_back("qg.pool", std::to_string(pool.size()));

  TripleSet chosen;
  for (auto s : kSplits) {
    const auto needed = positives_of(positives, s).size();
    auto& part = parts[static_cast<int>(s)];
    std::erase_if(part, [&](const Triple& t) { return chosen.contains(t); });
    const auto quota =
        std::min(subrule_quota(sub.complex.size(), rules.size(), needed), part.size());
    auto rng = make_rng(config.seed, "negatives/qg", item(s));
    for (const auto& t : sample_without_replacement(std::span<const Triple>(part), quota, rng)) {
      chosen.insert(t);
      out[s].add(t, "subrule");
    }
    out.notes.emplace_back("qg." + item(s) + ".pool", std::to_string(part.size()));
    out.notes.emplace_back("qg." + item(s) + ".quota", std::to_string(quota));
    fill_from_pa(out, state, s, needed - quota, chosen, config, kg.symbols());
    check_balance(out, config, s, needed, out[s].size());
  }
  finish(out, kg.symbols());
  return out;
}

NegativeSets generate_negatives(const PositiveSets& positives, std::span<const RankedRule> rules,
                                const KnowledgeGraph& kg, const NegativeConfig& config) {
  switch (config.method) {
    case NegativeMethod::Rc: return gen_rc(positives, kg, config);
    case NegativeMethod::Rb: return gen_rb(positives, rules, kg, config);
    case NegativeMethod::Pa: return gen_pa(positives, rules, kg, config);
    case NegativeMethod::Qg: return gen_qg(positives, rules, kg, config);
  }
  throw Error(ErrorKind::Usage, "unknown negative method");
}

}  // namespace inferbench
