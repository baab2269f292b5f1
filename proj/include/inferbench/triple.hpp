#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "inferbench/symbols.hpp"

namespace inferbench {

/// Either a relation triple (s, R, o) or a type triple (e, type, t). A type
/// triple stores e in `subject`, the type name in `predicate` and kNoConstant
/// in `object`; the type marker itself is never a predicate id.
struct Triple {
  ConstantId subject{};
  PredicateId predicate{};
  ConstantId object = kNoConstant;

  static constexpr Triple relation(ConstantId s, PredicateId r, ConstantId o) {
    return Triple{s, r, o};
  }
  static constexpr Triple type(ConstantId e, PredicateId t) {
    return Triple{e, t, kNoConstant};
  }

  constexpr bool is_type() const { return object == kNoConstant; }

  friend constexpr auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = (static_cast<std::uint64_t>(index_of(t.subject)) << 32) ^
                      index_of(t.object);
    h ^= static_cast<std::uint64_t>(index_of(t.predicate)) * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

/// "s<TAB>p<TAB>o" with the type marker in the middle of type triples.
std::string format_triple(const Triple& t, const SymbolTable& symbols);

/// Sorts by subject name, then relation triples before type triples, then
/// predicate name, then object name. Independent of interning order.
void sort_by_name(std::vector<Triple>& triples, const SymbolTable& symbols);

}  // namespace inferbench
