#include "inferbench/triple_store.hpp"

#include <algorithm>

namespace inferbench {

std::optional<FactId> TripleStore::insert(const Triple& t) {
  const auto id = static_cast<FactId>(facts_.size());
  if (!ids_.emplace(t, id).second) return std::nullopt;
  facts_.push_back(t);

  const auto p = index_of(t.predicate);
  const auto s = index_of(t.subject);
  by_predicate_[p].push_back(id);
  auto& ps = by_predicate_subject_[key(p, s)];
  if (ps.empty()) ++subject_counts_[p];
  ps.push_back(id);
  by_subject_[s].push_back(id);
  by_constant_[s].push_back(id);
  if (!t.is_type()) {
    const auto o = index_of(t.object);
    auto& po = by_predicate_object_[key(p, o)];
    if (po.empty()) ++object_counts_[p];
    po.push_back(id);
    by_object_[o].push_back(id);
    if (o != s) by_constant_[o].push_back(id);
  }
  return id;
}

void TripleStore::reserve(std::size_t n) {
  facts_.reserve(n);
  ids_.reserve(n);
}

std::optional<FactId> TripleStore::find(const Triple& t) const {
  if (auto it = ids_.find(t); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::span<const FactId> TripleStore::lookup(
    const std::unordered_map<std::uint64_t, std::vector<FactId>>& map,
    std::uint64_t k) {
  if (auto it = map.find(k); it != map.end()) return it->second;
  return {};
}

std::span<const FactId> TripleStore::lookup(
    const std::unordered_map<std::uint32_t, std::vector<FactId>>& map,
    std::uint32_t k) {
  if (auto it = map.find(k); it != map.end()) return it->second;
  return {};
}

std::span<const FactId> TripleStore::with_predicate(PredicateId p) const {
  return lookup(by_predicate_, index_of(p));
}

std::span<const FactId> TripleStore::with_predicate_subject(PredicateId p,
                                                            ConstantId s) const {
  return lookup(by_predicate_subject_, key(index_of(p), index_of(s)));
}

std::span<const FactId> TripleStore::with_predicate_object(PredicateId p,
                                                           ConstantId o) const {
  return lookup(by_predicate_object_, key(index_of(p), index_of(o)));
}

std::span<const FactId> TripleStore::with_subject(ConstantId s) const {
  return lookup(by_subject_, index_of(s));
}

std::span<const FactId> TripleStore::with_object(ConstantId o) const {
  return lookup(by_object_, index_of(o));
}

std::span<const FactId> TripleStore::with_constant(ConstantId c) const {
  return lookup(by_constant_, index_of(c));
}

std::size_t TripleStore::distinct_subjects(PredicateId p) const {
  auto it = subject_counts_.find(index_of(p));
  return it == subject_counts_.end() ? 0 : it->second;
}

std::size_t TripleStore::distinct_objects(PredicateId p) const {
  auto it = object_counts_.find(index_of(p));
  return it == object_counts_.end() ? 0 : it->second;
}

std::span<const FactId> TripleStore::restrict(std::span<const FactId> ids,
                                              FactWindow window) {
  if (ids.empty()) return ids;
  if (window.begin <= ids.front() && window.end > ids.back()) return ids;
  auto first = std::lower_bound(ids.begin(), ids.end(), window.begin);
  auto last = std::lower_bound(first, ids.end(), window.end);
  return {first, last};
}

}  // namespace inferbench
