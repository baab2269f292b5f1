#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "inferbench/symbols.hpp"
#include "inferbench/triple.hpp"
#include "inferbench/triple_store.hpp"

namespace inferbench {

/// A finite set of triples over a shared symbol table. Immutable once built;
/// concurrent reads are safe.
class KnowledgeGraph {
 public:
  /// Deduplicates `triples`, keeping first occurrences in order.
  KnowledgeGraph(std::shared_ptr<SymbolTable> symbols,
                 std::span<const Triple> triples);

  const TripleStore& store() const { return store_; }
  std::span<const Triple> facts() const { return store_.facts(); }
  std::size_t size() const { return store_.size(); }
  bool contains(const Triple& t) const { return store_.contains(t); }

  SymbolTable& symbols() const { return *symbols_; }
  const std::shared_ptr<SymbolTable>& symbols_ptr() const { return symbols_; }

  /// Input triples dropped as duplicates at construction.
  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

 private:
  std::shared_ptr<SymbolTable> symbols_;
  TripleStore store_;
  std::size_t duplicates_dropped_ = 0;
};

/// Symbols actually used by a set of triples, each list sorted by id.
struct Signature {
  std::vector<PredicateId> types;
  std::vector<PredicateId> relations;
  std::vector<ConstantId> constants;
};

Signature signature(std::span<const Triple> triples);
inline Signature signature(const KnowledgeGraph& kg) {
  return signature(kg.facts());
}

/// Parses tab-separated triples. Lines whose middle field equals the table's
/// type marker become type triples. Empty lines are skipped; a trailing '\r'
/// is tolerated. Throws ParseError (with line number) on wrong arity and
/// Error(Data) when a name is used both as constant and predicate.
std::vector<Triple> read_triples(std::istream& in, SymbolTable& symbols);
std::vector<Triple> read_triples(const std::filesystem::path& path,
                                 SymbolTable& symbols);

KnowledgeGraph load_kg(const std::filesystem::path& path,
                       std::shared_ptr<SymbolTable> symbols);

void write_triples(std::ostream& out, std::span<const Triple> triples,
                   const SymbolTable& symbols);
void write_triples(const std::filesystem::path& path,
                   std::span<const Triple> triples, const SymbolTable& symbols);

}  // namespace inferbench
