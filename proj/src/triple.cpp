#include "inferbench/triple.hpp"

#include <algorithm>
#include <tuple>

namespace inferbench {

std::string format_triple(const Triple& t, const SymbolTable& symbols) {
  if (t.is_type()) {
    return symbols.constant_name(t.subject) + '\t' + symbols.type_marker() +
           '\t' + symbols.predicate_name(t.predicate);
  }
  return symbols.constant_name(t.subject) + '\t' +
         symbols.predicate_name(t.predicate) + '\t' +
         symbols.constant_name(t.object);
}

void sort_by_name(std::vector<Triple>& triples, const SymbolTable& symbols) {
  const NameOrder order(symbols);
  auto key = [&](const Triple& t) {
    return std::make_tuple(order.rank(t.subject), t.is_type(),
                           order.rank(t.predicate),
                           t.is_type() ? 0u : order.rank(t.object));
  };
  std::sort(triples.begin(), triples.end(),
            [&](const Triple& a, const Triple& b) { return key(a) < key(b); });
}

}  // namespace inferbench
