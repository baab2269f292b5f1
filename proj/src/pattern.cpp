#include "inferbench/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "clause_syntax.hpp"
#include "inferbench/engine.hpp"
#include "inferbench/error.hpp"
#include "inferbench/parallel.hpp"
#include "inferbench/random.hpp"

namespace inferbench {

std::optional<std::uint32_t> Pattern::free_head_template() const {
  if (!shape.head.templated) return std::nullopt;
  const auto t = index_of(shape.head.predicate);
  for (const auto& a : shape.body) {
    if (a.templated && index_of(a.predicate) == t) return std::nullopt;
  }
  return t;
}

std::vector<std::uint32_t> Pattern::body_templates() const {
  std::vector<std::uint32_t> out;
  for (const auto& a : shape.body) {
    if (!a.templated) continue;
    const auto t = index_of(a.predicate);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

Pattern parse_pattern(std::string_view text, SymbolTable& symbols, std::string name) {
  std::size_t offset = 0;
  while (offset < text.size() && (text[offset] == ' ' || text[offset] == '\t')) ++offset;
  if (offset < text.size() && text[offset] == '@') {
    auto end = offset + 1;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    name = std::string(text.substr(offset + 1, end - offset - 1));
    if (name.empty()) throw ParseError("empty pattern label", 0, offset);
    offset = end;
  }
  Pattern pattern;
  pattern.name = std::move(name);
  detail::RawClause raw;
  try {
    raw = detail::parse_native_clause(text.substr(offset), symbols.type_marker());
  } catch (const ParseError& e) {
    throw ParseError(e.message(), 0, e.column() + offset);
  }
  pattern.shape = detail::build_rule(
      raw, symbols,
      [&](const std::string& pred, PredicateKind kind, std::size_t pos, Atom& atom) {
        if (pred.size() < 2 || pred[0] != '_') {
          atom.predicate = symbols.intern_predicate(pred, kind);
          return;
        }
        const auto lead = static_cast<unsigned char>(pred[1]);
        const auto implied = std::isupper(lead)   ? PredicateKind::Relation
                             : std::islower(lead) ? PredicateKind::Type
                                                  : kind;
        if (!std::isalpha(lead)) {
          throw ParseError("template '" + pred + "' must start with a letter", 0, pos + offset);
        }
        if (implied != kind) {
          throw ParseError(kind == PredicateKind::Relation
                               ? "type template '" + pred + "' in relation position"
                               : "relation template '" + pred + "' in type position",
                           0, pos + offset);
        }
        auto it = std::find_if(pattern.templates.begin(), pattern.templates.end(),
                               [&](const auto& t) { return t.name == pred; });
        if (it == pattern.templates.end()) {
          pattern.templates.push_back({pred, kind});
          it = pattern.templates.end() - 1;
        }
        atom.templated = true;
        atom.predicate = PredicateId{static_cast<std::uint32_t>(it - pattern.templates.begin())};
      });
  check_safety(pattern.shape);
  return pattern;
}

std::vector<Pattern> read_patterns(std::istream& in, SymbolTable& symbols) {
  std::vector<Pattern> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(parse_pattern(line, symbols, "pattern" + std::to_string(out.size() + 1)));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), line_no, e.column());
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::unordered_set<std::string> names;
  for (const auto& p : out) {
    if (!names.insert(p.name).second) {
      throw Error(ErrorKind::Data, "duplicate pattern name '" + p.name + "'");
    }
  }
  return out;
}

std::vector<Pattern> read_patterns(const std::filesystem::path& path, SymbolTable& symbols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Data, "cannot open " + path.string());
  try {
    return read_patterns(in, symbols);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string_view builtin_pattern_text() {
  return "@sym (x,_R,y) -> (y,_R,x)\n"
         "@inver (x,_R,y) -> (y,_S,x)\n"
         "@hier (x,_R,y) -> (x,_S,y)\n"
         "@comp (x,_R,y), (y,_S,z), x != z -> (x,_T,z)\n"
         "@inter (x,_R,y), (x,_S,y) -> (x,_T,y)\n"
         "@trian (x,_R,z), (y,_S,z), x != y -> (x,_T,y)\n"
         "@diam (x,_R,y), (x,_S,z), (y,_T,w), (z,_U,w), y != z -> (x,_V,w)\n";
}

std::vector<Pattern> builtin_patterns(SymbolTable& symbols) {
  std::istringstream in{std::string(builtin_pattern_text())};
  return read_patterns(in, symbols);
}

Rule instantiate(const Pattern& pattern, std::span<const PredicateId> assignment) {
  Rule rule = pattern.shape;
  auto fill = [&](Atom& a) {
    if (!a.templated) return;
    a.predicate = assignment[index_of(a.predicate)];
    a.templated = false;
  };
  for (auto& a : rule.body) fill(a);
  fill(rule.head);
  return rule;
}

namespace {

std::vector<PredicateId> predicates_by_name(const KnowledgeGraph& kg, PredicateKind kind) {
  const auto sig = signature(kg);
  auto preds = kind == PredicateKind::Relation ? sig.relations : sig.types;
  const auto& symbols = kg.symbols();
  std::sort(preds.begin(), preds.end(), [&](PredicateId a, PredicateId b) {
    return symbols.predicate_name(a) < symbols.predicate_name(b);
  });
  return preds;
}

std::string missing_kind_warning(const Pattern& p, PredicateKind kind) {
  return "pattern " + p.name + ": the KG has no " +
         (kind == PredicateKind::Relation ? "relations" : "types") + " to instantiate it";
}

// Completes body assignments into rules, choosing free head predicates at
// random, then sorts and deduplicates.
class CandidateBuilder {
 public:
  CandidateBuilder(const Pattern& pattern, const KnowledgeGraph& kg, std::uint64_t seed)
      : pattern_(pattern), kg_(kg), seed_(seed), head_(pattern.free_head_template()) {
    if (head_) head_pool_ = predicates_by_name(kg, pattern.templates[*head_].kind);
  }

  void add(std::vector<PredicateId> assignment) {
    if (head_) {
      Rule body_only = instantiate(pattern_, assignment_with_head(assignment));
      const auto body_text = canonical_body_text(body_only, kg_.symbols());
      std::vector<PredicateId> choices;
      for (auto p : head_pool_) {
        const bool in_body =
            std::any_of(body_only.body.begin(), body_only.body.end(), [&](const Atom& a) {
              return !a.is_inequality() && a.predicate == p;
            });
        if (!in_body) choices.push_back(p);
      }
      if (choices.empty()) {
        ++headless_;
        return;
      }
      auto rng = make_rng(seed_, "pattern-forge/head", pattern_.name + "\n" + body_text);
      assignment.resize(pattern_.templates.size());
      assignment[*head_] = choices[uniform_below(rng, choices.size())];
    }
    Rule rule = instantiate(pattern_, assignment);
    auto text = canonical_text(rule, kg_.symbols());
    if (seen_.insert(text).second) keyed_.emplace_back(std::move(text), std::move(rule));
  }

  Candidates finish() {
    std::sort(keyed_.begin(), keyed_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Candidates out;
    for (auto& [text, rule] : keyed_) out.rules.push_back(std::move(rule));
    if (headless_ > 0) {
      out.warnings.push_back("pattern " + pattern_.name + ": " + std::to_string(headless_) +
                             " bodies left no predicate for the head");
    }
    return out;
  }

 private:
  // The head atom needs some predicate to be instantiated at all; the body
  // text ignores it.
  std::vector<PredicateId> assignment_with_head(std::vector<PredicateId> a) const {
    a.resize(pattern_.templates.size(), PredicateId{0});
    return a;
  }

  const Pattern& pattern_;
  const KnowledgeGraph& kg_;
  std::uint64_t seed_;
  std::optional<std::uint32_t> head_;
  std::vector<PredicateId> head_pool_;
  std::unordered_set<std::string> seen_;
  std::vector<std::pair<std::string, Rule>> keyed_;
  std::size_t headless_ = 0;
};

}  // namespace

Candidates instantiate_candidates(const Pattern& pattern, const KnowledgeGraph& kg,
                                  std::uint64_t seed) {
  const auto templates = pattern.body_templates();
  std::vector<std::vector<PredicateId>> pools;
  for (auto t : templates) {
    pools.push_back(predicates_by_name(kg, pattern.templates[t].kind));
    if (pools.back().empty()) {
      return Candidates{{}, {missing_kind_warning(pattern, pattern.templates[t].kind)}};
    }
  }
  CandidateBuilder builder(pattern, kg, seed);
  std::vector<PredicateId> assignment(pattern.templates.size(), PredicateId{0});
  std::vector<PredicateId> used;
  auto assign = [&](auto&& self, std::size_t i) -> void {
    if (i == templates.size()) {
      builder.add(assignment);
      return;
    }
    for (auto p : pools[i]) {
      if (std::find(used.begin(), used.end(), p) != used.end()) continue;
      assignment[templates[i]] = p;
      used.push_back(p);
      self(self, i + 1);
      used.pop_back();
    }
  };
  assign(assign, 0);
  return builder.finish();
}

namespace {

struct WordsHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto x : v) h = splitmix64(h ^ x);
    return static_cast<std::size_t>(h);
  }
};

// Finds the template assignments under which the positive body atoms have a
// common match, ignoring inequalities. Atoms are visited in a connected
// order; a state is (depth, assignment, bindings still needed later), and
// each state is expanded once.
class AssignmentSearch {
 public:
  AssignmentSearch(const Pattern& pattern, const TripleStore& store)
      : pattern_(pattern),
        store_(store),
        assignment_(pattern.templates.size(), kFree),
        binding_(pattern.shape.variable_count(), kUnbound) {
    order_atoms();
  }

  std::vector<std::vector<PredicateId>> run() {
    visit(0);
    std::vector<std::vector<PredicateId>> out;
    for (const auto& a : found_) {
      std::vector<PredicateId> v;
      for (auto x : a) v.push_back(PredicateId{x});
      out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr std::uint32_t kFree = 0xFFFFFFFFu;

  void order_atoms() {
    const auto& body = pattern_.shape.body;
    std::vector<bool> bound(pattern_.shape.variable_count(), false);
    std::vector<bool> taken(body.size(), false);
    for (std::size_t i = 0; i < body.size(); ++i) taken[i] = body[i].is_inequality();
    auto score = [&](const Atom& a) {
      int s = a.templated ? 0 : 1;
      for (std::size_t k = 0; k < a.arity(); ++k) {
        const auto& t = a.term(k);
        if (!t.is_variable() || bound[t.var()]) s += 2;
      }
      return s;
    };
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (!taken[i] && (!best || score(body[i]) > score(body[*best]))) best = i;
      }
      if (!best) break;
      taken[*best] = true;
      order_.push_back(*best);
      const auto& a = body[*best];
      for (std::size_t k = 0; k < a.arity(); ++k) {
        if (a.term(k).is_variable()) bound[a.term(k).var()] = true;
      }
    }
    // Variables still needed after each depth.
    needed_.resize(order_.size() + 1);
    for (std::size_t d = 0; d <= order_.size(); ++d) {
      std::vector<bool> later(pattern_.shape.variable_count(), false);
      for (std::size_t e = d; e < order_.size(); ++e) {
        const auto& a = body[order_[e]];
        for (std::size_t k = 0; k < a.arity(); ++k) {
          if (a.term(k).is_variable()) later[a.term(k).var()] = true;
        }
      }
      for (std::uint32_t v = 0; v < later.size(); ++v) {
        if (later[v]) needed_[d].push_back(v);
      }
    }
  }

  ConstantId value(const Term& t) const {
    return t.is_variable() ? binding_[t.var()] : t.constant_id();
  }

  bool first_visit(std::size_t depth) {
    std::vector<std::uint32_t> key;
    key.reserve(1 + assignment_.size() + needed_[depth].size());
    key.push_back(static_cast<std::uint32_t>(depth));
    key.insert(key.end(), assignment_.begin(), assignment_.end());
    for (auto v : needed_[depth]) key.push_back(index_of(binding_[v]));
    return visited_.insert(std::move(key)).second;
  }

  void visit(std::size_t depth) {
    if (depth == order_.size()) {
      auto a = assignment_;
      for (auto& x : a) {
        if (x == kFree) x = 0;
      }
      found_.insert(std::move(a));
      return;
    }
    if (!first_visit(depth)) return;
    const Atom& atom = pattern_.shape.body[order_[depth]];
    const bool is_type = atom.kind == AtomKind::Type;
    const ConstantId s = value(atom.first);
    const ConstantId o = is_type ? kNoConstant : value(atom.second);

    std::optional<PredicateId> pred;
    if (!atom.templated) {
      pred = atom.predicate;
    } else if (assignment_[index_of(atom.predicate)] != kFree) {
      pred = PredicateId{assignment_[index_of(atom.predicate)]};
    }

    std::span<const FactId> ids;
    if (pred) {
      if (s != kUnbound && o != kUnbound) {
        const auto t = is_type ? Triple::type(s, *pred) : Triple::relation(s, *pred, o);
        if (store_.contains(t)) visit(depth + 1);
        return;
      }
      ids = s != kUnbound   ? store_.with_predicate_subject(*pred, s)
            : o != kUnbound ? store_.with_predicate_object(*pred, o)
                            : store_.with_predicate(*pred);
    } else {
      ids = s != kUnbound ? store_.with_subject(s)
            : (!is_type && o != kUnbound) ? store_.with_object(o)
                                          : std::span<const FactId>{};
      if (s == kUnbound && (is_type || o == kUnbound)) {
        scan_all(depth, atom);
        return;
      }
    }
    for (FactId id : ids) try_fact(depth, atom, store_.fact(id));
  }

  void scan_all(std::size_t depth, const Atom& atom) {
    for (const auto& fact : store_.facts()) try_fact(depth, atom, fact);
  }

  void try_fact(std::size_t depth, const Atom& atom, const Triple& fact) {
    const bool is_type = atom.kind == AtomKind::Type;
    if (fact.is_type() != is_type) return;
    std::uint32_t* slot = nullptr;
    if (atom.templated) {
      slot = &assignment_[index_of(atom.predicate)];
      if (*slot == kFree) {
        const auto p = index_of(fact.predicate);
        for (auto x : assignment_) {
          if (x == p) return;  // templates take distinct predicates
        }
        *slot = p;
      } else {
        slot = nullptr;
        if (assignment_[index_of(atom.predicate)] != index_of(fact.predicate)) return;
      }
    } else if (atom.predicate != fact.predicate) {
      return;
    }
    std::uint32_t bound[2];
    int n = 0;
    auto assign = [&](const Term& t, ConstantId v) {
      if (!t.is_variable()) return t.constant_id() == v;
      auto& b = binding_[t.var()];
      if (b == kUnbound) {
        b = v;
        bound[n++] = t.var();
        return true;
      }
      return b == v;
    };
    if (assign(atom.first, fact.subject) && (is_type || assign(atom.second, fact.object))) {
      visit(depth + 1);
    }
    for (int i = 0; i < n; ++i) binding_[bound[i]] = kUnbound;
    if (slot) *slot = kFree;
  }

  const Pattern& pattern_;
  const TripleStore& store_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::uint32_t>> needed_;
  std::vector<std::uint32_t> assignment_;
  std::vector<ConstantId> binding_;
  std::unordered_set<std::vector<std::uint32_t>, WordsHash> visited_;
  std::unordered_set<std::vector<std::uint32_t>, WordsHash> found_;
};

bool has_witness(const Rule& rule, const TripleStore& store) {
  return !for_each_witness(rule, store, [](std::span<const ConstantId>) { return false; });
}

}  // namespace

Candidates enumerate_supported_candidates(const Pattern& pattern, const KnowledgeGraph& kg,
                                          std::uint64_t seed, unsigned workers) {
  for (auto t : pattern.body_templates()) {
    if (predicates_by_name(kg, pattern.templates[t].kind).empty()) {
      return Candidates{{}, {missing_kind_warning(pattern, pattern.templates[t].kind)}};
    }
  }
  auto assignments = AssignmentSearch(pattern, kg.store()).run();
  // Inequalities were ignored while searching; recheck with them.
  std::vector<char> keep(assignments.size(), 0);
  parallel_for(assignments.size(), workers, [&](std::size_t i) {
    keep[i] = has_witness(instantiate(pattern, assignments[i]), kg.store()) ? 1 : 0;
  });
  CandidateBuilder builder(pattern, kg, seed);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (keep[i]) builder.add(std::move(assignments[i]));
  }
  return builder.finish();
}

void rank(std::vector<RankedRule>& rules) {
  std::sort(rules.begin(), rules.end(), [](const RankedRule& a, const RankedRule& b) {
    if (a.support != b.support) return a.support > b.support;
    return a.canonical < b.canonical;
  });
}

Selection select_rules(std::span<const Pattern> patterns, const KnowledgeGraph& kg,
                       std::size_t k1, std::uint64_t seed, unsigned workers) {
  if (k1 == 0) throw Error(ErrorKind::Usage, "k1 must be positive");
  Selection out;
  std::unordered_set<std::string> chosen;
  for (const auto& pattern : patterns) {
    auto candidates = enumerate_supported_candidates(pattern, kg, seed, workers);
    out.warnings.insert(out.warnings.end(), candidates.warnings.begin(),
                        candidates.warnings.end());
    std::vector<RankedRule> ranked(candidates.rules.size());
    parallel_for(ranked.size(), workers, [&](std::size_t i) {
      auto& r = ranked[i];
      r.rule = candidates.rules[i];
      r.support = count_witnesses(r.rule, kg);
      r.pattern = pattern.name;
      r.canonical = canonical_text(r.rule, kg.symbols());
    });
    rank(ranked);
    if (ranked.size() < k1) {
      out.warnings.push_back("pattern " + pattern.name + ": only " +
                             std::to_string(ranked.size()) +
                             " candidates with positive support (k1 = " + std::to_string(k1) +
                             ")");
    }
    if (ranked.size() > k1) ranked.resize(k1);
    for (auto& r : ranked) {
      if (chosen.insert(r.canonical).second) out.rules.push_back(std::move(r));
    }
  }
  return out;
}

Selection support_of(std::span<const Rule> rules, const KnowledgeGraph& kg, unsigned workers,
                     std::string_view label) {
  std::vector<RankedRule> ranked(rules.size());
  parallel_for(ranked.size(), workers, [&](std::size_t i) {
    auto& r = ranked[i];
    r.rule = rules[i];
    r.support = count_witnesses(r.rule, kg);
    r.pattern = std::string(label);
    r.canonical = canonical_text(r.rule, kg.symbols());
  });
  Selection out;
  std::unordered_set<std::string> chosen;
  for (auto& r : ranked) {
    if (!chosen.insert(r.canonical).second) {
      out.warnings.push_back("duplicate rule dropped: " + r.canonical);
      continue;
    }
    if (r.support == 0) out.warnings.push_back("rule without support: " + r.canonical);
    out.rules.push_back(std::move(r));
  }
  return out;
}

}  // namespace inferbench
