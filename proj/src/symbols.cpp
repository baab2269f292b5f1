#include "inferbench/symbols.hpp"

#include <algorithm>
#include <numeric>

#include "inferbench/error.hpp"

namespace inferbench {

SymbolTable::SymbolTable(std::string type_marker)
    : type_marker_(std::move(type_marker)) {}

ConstantId SymbolTable::intern_constant(std::string_view name) {
  std::string key(name);
  if (auto it = constant_ids_.find(key); it != constant_ids_.end()) {
    return ConstantId{it->second};
  }
  if (predicate_ids_.contains(key)) {
    throw Error(ErrorKind::Data, "signature conflict: '" + key +
                                     "' is used both as a predicate and a constant");
  }
  const auto id = static_cast<std::uint32_t>(constant_names_.size());
  if (id >= kReservedConstantBase) {
    throw Error(ErrorKind::Data, "too many constants");
  }
  constant_names_.push_back(key);
  constant_ids_.emplace(std::move(key), id);
  return ConstantId{id};
}

PredicateId SymbolTable::intern_predicate(std::string_view name,
                                          PredicateKind kind) {
  std::string key(name);
  if (auto it = predicate_ids_.find(key); it != predicate_ids_.end()) {
    if (predicate_kinds_[it->second] != kind) {
      throw Error(ErrorKind::Data, "signature conflict: '" + key +
                                       "' is used both as a type and a relation");
    }
    return PredicateId{it->second};
  }
  if (key == type_marker_) {
    throw Error(ErrorKind::Data, "signature conflict: '" + key +
                                     "' is the reserved type marker");
  }
  if (constant_ids_.contains(key)) {
    throw Error(ErrorKind::Data, "signature conflict: '" + key +
                                     "' is used both as a constant and a predicate");
  }
  const auto id = static_cast<std::uint32_t>(predicate_names_.size());
  predicate_names_.push_back(key);
  predicate_kinds_.push_back(kind);
  predicate_ids_.emplace(std::move(key), id);
  return PredicateId{id};
}

std::optional<ConstantId> SymbolTable::find_constant(std::string_view name) const {
  if (auto it = constant_ids_.find(std::string(name)); it != constant_ids_.end()) {
    return ConstantId{it->second};
  }
  return std::nullopt;
}

std::optional<PredicateId> SymbolTable::find_predicate(std::string_view name) const {
  if (auto it = predicate_ids_.find(std::string(name)); it != predicate_ids_.end()) {
    return PredicateId{it->second};
  }
  return std::nullopt;
}

std::string SymbolTable::constant_name(ConstantId id) const {
  const auto i = index_of(id);
  if (i >= kReservedConstantBase) {
    return "_:f" + std::to_string(i - kReservedConstantBase);
  }
  return constant_names_.at(i);
}

const std::string& SymbolTable::predicate_name(PredicateId id) const {
  return predicate_names_.at(index_of(id));
}

PredicateKind SymbolTable::kind(PredicateId id) const {
  return predicate_kinds_.at(index_of(id));
}

namespace {

std::vector<std::uint32_t> ranks_of(std::size_t n,
                                    const auto& name_of) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return name_of(a) < name_of(b);
  });
  std::vector<std::uint32_t> rank(n);
  for (std::uint32_t i = 0; i < n; ++i) rank[order[i]] = i;
  return rank;
}

}  // namespace

NameOrder::NameOrder(const SymbolTable& symbols) {
  constant_rank_ = ranks_of(symbols.constant_count(), [&](std::uint32_t i) {
    return symbols.constant_name(ConstantId{i});
  });
  predicate_rank_ = ranks_of(symbols.predicate_count(), [&](std::uint32_t i) {
    return symbols.predicate_name(PredicateId{i});
  });
}

std::uint32_t NameOrder::rank(ConstantId c) const {
  const auto i = index_of(c);
  // Frozen and absent constants sort after every named one, by id.
  if (i >= constant_rank_.size()) return i;
  return constant_rank_[i];
}

}  // namespace inferbench
