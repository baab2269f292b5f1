#pragma once

// Shared fixtures and brute-force oracles for the test binaries. The oracles
// deliberately avoid the library's join engine: they enumerate every
// assignment of constants to variables and test atoms against a std::set.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "inferbench/kg.hpp"
#include "inferbench/random.hpp"
#include "inferbench/rule.hpp"
#include "inferbench/rule_parser.hpp"

namespace testing_support {

using namespace inferbench;

using FactSet = std::set<Triple>;

inline std::shared_ptr<SymbolTable> fresh_symbols() { return std::make_shared<SymbolTable>(); }

/// Tab-separated triples, one per line.
inline KnowledgeGraph kg_from(std::string_view text, std::shared_ptr<SymbolTable> symbols) {
  std::istringstream in{std::string(text)};
  const auto triples = read_triples(in, *symbols);
  return KnowledgeGraph(symbols, triples);
}

inline constexpr std::string_view kFig1b =
    "Alex\tIsColleague\tBob\n"
    "Bob\tIsColleague\tJohn\n"
    "Harry\tIsColleague\tJames\n"
    "James\tIsColleague\tTony\n"
    "Ada\tIsColleague\tEve\n"
    "Eve\tIsColleague\tLucy\n";

inline constexpr std::string_view kTransitivity =
    "(x,IsColleague,y), (y,IsColleague,z) -> (x,IsColleague,z)";

inline Triple rel(SymbolTable& s, std::string_view a, std::string_view r, std::string_view b) {
  return Triple::relation(s.intern_constant(a), s.intern_predicate(r, PredicateKind::Relation),
                          s.intern_constant(b));
}

inline Triple typ(SymbolTable& s, std::string_view e, std::string_view t) {
  return Triple::type(s.intern_constant(e), s.intern_predicate(t, PredicateKind::Type));
}

inline std::vector<std::string> names(std::span<const Triple> ts, const SymbolTable& s) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(format_triple(t, s));
  std::sort(out.begin(), out.end());
  return out;
}

// ---- random instances -----------------------------------------------------

struct RandomShape {
  int constants = 10;
  int relations = 3;
  int types = 2;
};

inline std::string constant_name(int i) { return "c" + std::to_string(i); }
inline std::string relation_name(int i) { return "R" + std::to_string(i); }
inline std::string type_name(int i) { return "T" + std::to_string(i); }

/// Up to `count` distinct random triples (about 15% type triples).
inline std::string random_kg_text(Rng& rng, const RandomShape& shape, int count) {
  std::set<std::string> lines;
  for (int i = 0; i < count * 3 && static_cast<int>(lines.size()) < count; ++i) {
    const auto s = constant_name(static_cast<int>(uniform_below(rng, shape.constants)));
    if (shape.types > 0 && uniform_below(rng, 100) < 15) {
      lines.insert(s + "\ttype\t" + type_name(static_cast<int>(uniform_below(rng, shape.types))));
    } else {
      lines.insert(s + "\t" + relation_name(static_cast<int>(uniform_below(rng, shape.relations))) +
                   "\t" + constant_name(static_cast<int>(uniform_below(rng, shape.constants))));
    }
  }
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

/// A random safe rule: 1-3 positive body atoms over variables x0..x3, maybe
/// an inequality, maybe a constant, and a head over body variables.
inline std::string random_rule_text(Rng& rng, const RandomShape& shape, int max_body = 3) {
  const int body_size = 1 + static_cast<int>(uniform_below(rng, max_body));
  std::vector<std::string> used;
  auto var = [&](bool fresh_ok) {
    if (used.empty() || (fresh_ok && uniform_below(rng, 100) < 55)) {
      std::string v = "x" + std::to_string(uniform_below(rng, 4));
      if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);
      return v;
    }
    return used[uniform_below(rng, used.size())];
  };
  auto term = [&](bool fresh_ok) {
    if (uniform_below(rng, 100) < 8) {
      return "<" + constant_name(static_cast<int>(uniform_below(rng, shape.constants))) + ">";
    }
    return var(fresh_ok);
  };
  std::vector<std::string> atoms;
  for (int i = 0; i < body_size; ++i) {
    if (shape.types > 0 && uniform_below(rng, 100) < 20) {
      atoms.push_back("(" + term(true) + ",type," +
                      type_name(static_cast<int>(uniform_below(rng, shape.types))) + ")");
    } else {
      const auto a = term(true);
      const auto b = term(true);
      atoms.push_back("(" + a + "," +
                      relation_name(static_cast<int>(uniform_below(rng, shape.relations))) + "," +
                      b + ")");
    }
  }
  if (used.empty()) {
    // Only constants so far; bind one variable so the head has something.
    atoms.push_back("(x0," + relation_name(0) + ",x1)");
    used = {"x0", "x1"};
  }
  if (used.size() >= 2 && uniform_below(rng, 100) < 30) {
    const auto a = used[uniform_below(rng, used.size())];
    auto b = used[uniform_below(rng, used.size())];
    if (a != b) atoms.push_back(a + " != " + b);
  }
  std::string head;
  if (shape.types > 0 && uniform_below(rng, 100) < 15) {
    head = "(" + var(false) + ",type," +
           type_name(static_cast<int>(uniform_below(rng, shape.types))) + ")";
  } else {
    const auto a = var(false);
    const auto b = uniform_below(rng, 100) < 10
                       ? "<" + constant_name(static_cast<int>(uniform_below(rng, shape.constants))) + ">"
                       : var(false);
    head = "(" + a + "," + relation_name(static_cast<int>(uniform_below(rng, shape.relations))) +
           "," + b + ")";
  }
  std::string text;
  for (std::size_t i = 0; i < atoms.size(); ++i) text += (i ? ", " : "") + atoms[i];
  return text + " -> " + head;
}

// ---- brute-force oracles ---------------------------------------------------

/// Every constant mentioned by the facts or the rules.
inline std::vector<ConstantId> domain_of(const FactSet& facts, std::span<const Rule> rules) {
  std::set<std::uint32_t> ids;
  for (const auto& t : facts) {
    ids.insert(index_of(t.subject));
    if (!t.is_type()) ids.insert(index_of(t.object));
  }
  for (const auto& r : rules) {
    auto add = [&](const Atom& a) {
      for (std::size_t i = 0; i < a.arity(); ++i) {
        if (!a.term(i).is_variable()) ids.insert(a.term(i).value);
      }
    };
    add(r.head);
    for (const auto& a : r.body) add(a);
  }
  std::vector<ConstantId> out;
  for (auto i : ids) out.push_back(ConstantId{i});
  return out;
}

inline ConstantId value_of(const Term& t, const std::vector<ConstantId>& sigma) {
  return t.is_variable() ? sigma[t.var()] : t.constant_id();
}

inline Triple ground_atom(const Atom& a, const std::vector<ConstantId>& sigma) {
  if (a.kind == AtomKind::Type) return Triple::type(value_of(a.first, sigma), a.predicate);
  return Triple::relation(value_of(a.first, sigma), a.predicate, value_of(a.second, sigma));
}

/// Calls f(sigma) for every total assignment over `domain` that satisfies
/// the body of `r` in `facts`.
template <class F>
void brute_witnesses(const Rule& r, const FactSet& facts, const std::vector<ConstantId>& domain,
                     F&& f) {
  const auto n = r.variable_count();
  if (domain.empty() && n > 0) return;
  std::vector<std::size_t> digits(n, 0);
  std::vector<ConstantId> sigma(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) sigma[i] = domain[digits[i]];
    bool ok = true;
    for (const auto& a : r.body) {
      if (a.kind == AtomKind::Inequality) {
        ok = value_of(a.first, sigma) != value_of(a.second, sigma);
      } else {
        ok = facts.contains(ground_atom(a, sigma));
      }
      if (!ok) break;
    }
    if (ok) f(sigma);
    std::size_t i = 0;
    while (i < n && ++digits[i] == domain.size()) digits[i++] = 0;
    if (i == n) break;
  }
}

inline FactSet brute_apply(const Rule& r, const FactSet& facts) {
  const std::vector<Rule> one{r};
  const auto domain = domain_of(facts, one);
  FactSet out;
  brute_witnesses(r, facts, domain, [&](const auto& sigma) { out.insert(ground_atom(r.head, sigma)); });
  return out;
}

/// Round-based fixpoint: apply every rule to everything until nothing changes.
inline FactSet naive_fixpoint(std::span<const Rule> rules, FactSet facts) {
  while (true) {
    FactSet next = facts;
    for (const auto& r : rules) {
      for (const auto& t : brute_apply(r, facts)) next.insert(t);
    }
    if (next.size() == facts.size()) return facts;
    facts = std::move(next);
  }
}

// ---- files -----------------------------------------------------------------

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("inferbench-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace testing_support
