#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace inferbench {

enum class ConstantId : std::uint32_t {};
enum class PredicateId : std::uint32_t {};

constexpr std::uint32_t index_of(ConstantId c) {
  return static_cast<std::uint32_t>(c);
}
constexpr std::uint32_t index_of(PredicateId p) {
  return static_cast<std::uint32_t>(p);
}

/// Object slot of a type triple.
inline constexpr ConstantId kNoConstant{0xFFFFFFFFu};

/// Ids at or above this value are never handed out by a SymbolTable; the
/// entailment checker uses them for frozen (fresh) constants.
inline constexpr std::uint32_t kReservedConstantBase = 0x80000000u;

enum class PredicateKind : std::uint8_t { Relation, Type };

/// Name <-> dense id bijections for constants and predicates. A name is
/// either a constant or a predicate, never both; a predicate has one kind.
class SymbolTable {
 public:
  explicit SymbolTable(std::string type_marker = "type");

  /// Throws Error(Data) when `name` is already a predicate.
  ConstantId intern_constant(std::string_view name);
  /// Throws Error(Data) when `name` is already a constant or a predicate of
  /// the other kind, or equals the type marker.
  PredicateId intern_predicate(std::string_view name, PredicateKind kind);

  std::optional<ConstantId> find_constant(std::string_view name) const;
  std::optional<PredicateId> find_predicate(std::string_view name) const;

  /// Frozen constants render as "_:f<n>".
  std::string constant_name(ConstantId id) const;
  const std::string& predicate_name(PredicateId id) const;
  PredicateKind kind(PredicateId id) const;

  std::size_t constant_count() const { return constant_names_.size(); }
  std::size_t predicate_count() const { return predicate_names_.size(); }
  const std::string& type_marker() const { return type_marker_; }

 private:
  std::string type_marker_;
  std::vector<std::string> constant_names_;
  std::vector<std::string> predicate_names_;
  std::vector<PredicateKind> predicate_kinds_;
  std::unordered_map<std::string, std::uint32_t> constant_ids_;
  std::unordered_map<std::string, std::uint32_t> predicate_ids_;
};

/// Position of every id in name order, so id-keyed data can be sorted the
/// same way regardless of interning order. Snapshot; rebuild after interning.
class NameOrder {
 public:
  explicit NameOrder(const SymbolTable& symbols);

  std::uint32_t rank(ConstantId c) const;
  std::uint32_t rank(PredicateId p) const { return predicate_rank_[index_of(p)]; }

 private:
  std::vector<std::uint32_t> constant_rank_;
  std::vector<std::uint32_t> predicate_rank_;
};

}  // namespace inferbench
