#include "inferbench/kg.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "inferbench/error.hpp"

namespace inferbench {

KnowledgeGraph::KnowledgeGraph(std::shared_ptr<SymbolTable> symbols,
                               std::span<const Triple> triples)
    : symbols_(std::move(symbols)) {
  store_.reserve(triples.size());
  for (const auto& t : triples) {
    if (!store_.insert(t)) ++duplicates_dropped_;
  }
}

Signature signature(std::span<const Triple> triples) {
  std::set<std::uint32_t> types, relations, constants;
  for (const auto& t : triples) {
    constants.insert(index_of(t.subject));
    if (t.is_type()) {
      types.insert(index_of(t.predicate));
    } else {
      relations.insert(index_of(t.predicate));
      constants.insert(index_of(t.object));
    }
  }
  Signature sig;
  for (auto p : types) sig.types.push_back(PredicateId{p});
  for (auto p : relations) sig.relations.push_back(PredicateId{p});
  for (auto c : constants) sig.constants.push_back(ConstantId{c});
  return sig;
}

std::vector<Triple> read_triples(std::istream& in, SymbolTable& symbols) {
  std::vector<Triple> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      const auto fields = std::count(line.begin(), line.end(), '\t') + 1;
      throw ParseError("expected 3 tab-separated fields, found " +
                           std::to_string(fields),
                       line_no, 0);
    }
    const std::string_view view(line);
    const auto s = view.substr(0, t1);
    const auto p = view.substr(t1 + 1, t2 - t1 - 1);
    const auto o = view.substr(t2 + 1);
    if (s.empty() || p.empty() || o.empty()) {
      throw ParseError("empty field", line_no, s.empty() ? 0 : t1 + 1);
    }
    try {
      if (p == symbols.type_marker()) {
        const auto e = symbols.intern_constant(s);
        out.push_back(Triple::type(e, symbols.intern_predicate(o, PredicateKind::Type)));
      } else {
        const auto subj = symbols.intern_constant(s);
        const auto rel = symbols.intern_predicate(p, PredicateKind::Relation);
        out.push_back(Triple::relation(subj, rel, symbols.intern_constant(o)));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw Error(ErrorKind::Data,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Triple> read_triples(const std::filesystem::path& path,
                                 SymbolTable& symbols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Data, "cannot open " + path.string());
  try {
    return read_triples(in, symbols);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

KnowledgeGraph load_kg(const std::filesystem::path& path,
                       std::shared_ptr<SymbolTable> symbols) {
  auto triples = read_triples(path, *symbols);
  return KnowledgeGraph(std::move(symbols), triples);
}

void write_triples(std::ostream& out, std::span<const Triple> triples,
                   const SymbolTable& symbols) {
  for (const auto& t : triples) out << format_triple(t, symbols) << '\n';
}

void write_triples(const std::filesystem::path& path,
                   std::span<const Triple> triples, const SymbolTable& symbols) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Data, "cannot write " + path.string());
  write_triples(out, triples, symbols);
}

}  // namespace inferbench
