#include "inferbench/rule.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string_view>
#include <tuple>

#include "inferbench/error.hpp"

namespace inferbench {

bool Rule::has_inequalities() const {
  return std::any_of(body.begin(), body.end(),
                     [](const Atom& a) { return a.is_inequality(); });
}

std::size_t Rule::positive_body_size() const {
  return static_cast<std::size_t>(std::count_if(
      body.begin(), body.end(), [](const Atom& a) { return !a.is_inequality(); }));
}

void check_safety(const Rule& rule) {
  if (rule.head.is_inequality()) {
    throw Error(ErrorKind::Data, "unsafe rule: inequality in head");
  }
  std::vector<bool> bound(rule.variable_count(), false);
  bool has_positive = false;
  for (const auto& atom : rule.body) {
    if (atom.is_inequality()) continue;
    has_positive = true;
    for (std::size_t i = 0; i < atom.arity(); ++i) {
      if (atom.term(i).is_variable()) bound[atom.term(i).var()] = true;
    }
  }
  if (!has_positive) {
    throw Error(ErrorKind::Data, "unsafe rule: body has no inequality-free atom");
  }
  for (std::size_t v = 0; v < bound.size(); ++v) {
    if (!bound[v]) {
      throw Error(ErrorKind::Data, "unsafe rule: variable '" + rule.variables[v] +
                                       "' does not occur in an inequality-free body atom");
    }
  }
}

bool is_safe(const Rule& rule) {
  try {
    check_safety(rule);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Triple ground(const Atom& atom, std::span<const ConstantId> binding) {
  auto value = [&](const Term& t) {
    return t.is_variable() ? binding[t.var()] : t.constant_id();
  };
  if (atom.kind == AtomKind::Type) return Triple::type(value(atom.first), atom.predicate);
  return Triple::relation(value(atom.first), atom.predicate, value(atom.second));
}

void remove_duplicate_body_atoms(Rule& rule) {
  std::vector<Atom> unique;
  for (const auto& a : rule.body) {
    if (std::find(unique.begin(), unique.end(), a) == unique.end()) unique.push_back(a);
  }
  rule.body = std::move(unique);
}

namespace {

bool is_plain_variable_name(std::string_view name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string term_text(const Term& t, const Rule& rule, const SymbolTable& symbols) {
  if (t.is_variable()) {
    const auto& name = rule.variables[t.var()];
    return is_plain_variable_name(name) ? name : "v" + std::to_string(t.var());
  }
  return "<" + symbols.constant_name(t.constant_id()) + ">";
}

std::string atom_text(const Atom& a, const Rule& rule, const SymbolTable& symbols) {
  switch (a.kind) {
    case AtomKind::Relation:
      return "(" + term_text(a.first, rule, symbols) + "," +
             symbols.predicate_name(a.predicate) + "," +
             term_text(a.second, rule, symbols) + ")";
    case AtomKind::Type:
      return "(" + term_text(a.first, rule, symbols) + "," + symbols.type_marker() +
             "," + symbols.predicate_name(a.predicate) + ")";
    case AtomKind::Inequality:
      return term_text(a.first, rule, symbols) + " != " +
             term_text(a.second, rule, symbols);
  }
  return {};
}

// Renders atoms with variables numbered by first occurrence. `numbering`
// carries the assignment across calls.
class Renderer {
 public:
  Renderer(const SymbolTable& symbols, std::size_t variable_count)
      : symbols_(symbols), number_(variable_count, kUnset) {}

  std::string term(const Term& t) {
    if (!t.is_variable()) return "<" + symbols_.constant_name(t.constant_id()) + ">";
    auto& n = number_[t.var()];
    if (n == kUnset) n = next_++;
    return "?" + std::to_string(n);
  }

  std::string atom(const Atom& a) {
    if (a.kind == AtomKind::Type) {
      auto e = term(a.first);
      return "(" + e + "," + symbols_.type_marker() + "," +
             symbols_.predicate_name(a.predicate) + ")";
    }
    auto s = term(a.first);
    auto o = term(a.second);
    return "(" + s + "," + symbols_.predicate_name(a.predicate) + "," + o + ")";
  }

  std::string inequality(const Atom& a) {
    auto x = term(a.first);
    auto y = term(a.second);
    if (y < x) std::swap(x, y);
    return x + "!=" + y;
  }

 private:
  static constexpr std::uint32_t kUnset = 0xFFFFFFFFu;
  const SymbolTable& symbols_;
  std::vector<std::uint32_t> number_;
  std::uint32_t next_ = 0;
};

// Variable-blind sort key of a positive atom.
std::tuple<int, std::string, std::string, std::string> shape_key(
    const Atom& a, const SymbolTable& symbols) {
  auto slot = [&](const Term& t) {
    return t.is_variable() ? std::string("?") : "<" + symbols.constant_name(t.constant_id());
  };
  return {static_cast<int>(a.kind), symbols.predicate_name(a.predicate), slot(a.first),
          a.kind == AtomKind::Type ? std::string() : slot(a.second)};
}

std::string canonical(const Rule& input, const SymbolTable& symbols, bool with_head) {
  Rule rule = input;
  remove_duplicate_body_atoms(rule);
  std::vector<Atom> positive;
  std::vector<Atom> inequalities;
  for (const auto& a : rule.body) {
    (a.is_inequality() ? inequalities : positive).push_back(a);
  }
  using Key = decltype(shape_key(positive.front(), symbols));
  std::vector<std::pair<Key, Atom>> keyed;
  for (const auto& a : positive) keyed.emplace_back(shape_key(a, symbols), a);
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  // Groups of atoms with equal keys; only orders inside a group can differ
  // between isomorphic rules.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i + 1;
    while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
    groups.emplace_back(i, j);
    i = j;
  }
  std::vector<std::size_t> order(keyed.size());
  std::iota(order.begin(), order.end(), 0);

  std::string best;
  bool have_best = false;
  auto render = [&] {
    Renderer r(symbols, rule.variable_count());
    std::string head;
    if (with_head) head = r.atom(rule.head);
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0) out += ", ";
      out += r.atom(keyed[order[i]].second);
    }
    std::vector<std::string> neq;
    for (const auto& a : inequalities) neq.push_back(r.inequality(a));
    std::sort(neq.begin(), neq.end());
    neq.erase(std::unique(neq.begin(), neq.end()), neq.end());
    for (const auto& n : neq) out += ", " + n;
    if (with_head) out += " -> " + head;
    if (!have_best || out < best) {
      best = std::move(out);
      have_best = true;
    }
  };
  // Odometer over per-group permutations.
  auto permute = [&](auto&& self, std::size_t g) -> void {
    if (g == groups.size()) {
      render();
      return;
    }
    auto [lo, hi] = groups[g];
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(lo),
              order.begin() + static_cast<std::ptrdiff_t>(hi));
    do {
      self(self, g + 1);
    } while (std::next_permutation(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                   order.begin() + static_cast<std::ptrdiff_t>(hi)));
  };
  permute(permute, 0);
  return best;
}

}  // namespace

std::string to_string(const Rule& rule, const SymbolTable& symbols) {
  std::string out;
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    if (i > 0) out += ", ";
    out += atom_text(rule.body[i], rule, symbols);
  }
  return out + " -> " + atom_text(rule.head, rule, symbols);
}

std::string canonical_text(const Rule& rule, const SymbolTable& symbols) {
  return canonical(rule, symbols, true);
}

std::string canonical_body_text(const Rule& rule, const SymbolTable& symbols) {
  return canonical(rule, symbols, false);
}

}  // namespace inferbench
