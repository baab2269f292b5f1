#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "inferbench/triple.hpp"

namespace inferbench {

using FactId = std::uint32_t;

/// Half-open range of fact ids. Facts are numbered in insertion order, so a
/// window selects "facts added before/after round k" in semi-naive evaluation.
struct FactWindow {
  FactId begin = 0;
  FactId end = std::numeric_limits<FactId>::max();

  constexpr bool contains(FactId id) const { return id >= begin && id < end; }
};

/// Append-only, deduplicating triple table with the lookup indexes used by
/// joins. Every posting list is sorted by fact id. Lookups return spans into
/// internal storage that stay valid until the next insert.
class TripleStore {
 public:
  TripleStore() = default;

  /// Returns the new fact id, or nullopt if the triple was already present.
  std::optional<FactId> insert(const Triple& t);
  void reserve(std::size_t n);

  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }
  const Triple& fact(FactId id) const { return facts_[id]; }
  std::span<const Triple> facts() const { return facts_; }

  bool contains(const Triple& t) const { return ids_.contains(t); }
  std::optional<FactId> find(const Triple& t) const;

  std::span<const FactId> with_predicate(PredicateId p) const;
  /// For type predicates this lists the type triples of `s`.
  std::span<const FactId> with_predicate_subject(PredicateId p, ConstantId s) const;
  /// Relation triples only.
  std::span<const FactId> with_predicate_object(PredicateId p, ConstantId o) const;
  std::span<const FactId> with_subject(ConstantId s) const;
  /// Relation triples only.
  std::span<const FactId> with_object(ConstantId o) const;
  /// Every fact mentioning `c` in either constant slot (once per fact).
  std::span<const FactId> with_constant(ConstantId c) const;

  /// Number of distinct subjects / objects among facts of `p`.
  std::size_t distinct_subjects(PredicateId p) const;
  std::size_t distinct_objects(PredicateId p) const;

  /// Sub-span of `ids` inside `window` (ids must be sorted).
  static std::span<const FactId> restrict(std::span<const FactId> ids,
                                          FactWindow window);

 private:
  static std::uint64_t key(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
  static std::span<const FactId> lookup(
      const std::unordered_map<std::uint64_t, std::vector<FactId>>& map,
      std::uint64_t k);
  static std::span<const FactId> lookup(
      const std::unordered_map<std::uint32_t, std::vector<FactId>>& map,
      std::uint32_t k);

  std::vector<Triple> facts_;
  std::unordered_map<Triple, FactId, TripleHash> ids_;
  std::unordered_map<std::uint32_t, std::vector<FactId>> by_predicate_;
  std::unordered_map<std::uint64_t, std::vector<FactId>> by_predicate_subject_;
  std::unordered_map<std::uint64_t, std::vector<FactId>> by_predicate_object_;
  std::unordered_map<std::uint32_t, std::vector<FactId>> by_subject_;
  std::unordered_map<std::uint32_t, std::vector<FactId>> by_object_;
  std::unordered_map<std::uint32_t, std::vector<FactId>> by_constant_;
  std::unordered_map<std::uint32_t, std::size_t> subject_counts_;
  std::unordered_map<std::uint32_t, std::size_t> object_counts_;
};

}  // namespace inferbench
