#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "inferbench/kg.hpp"
#include "inferbench/pattern.hpp"
#include "inferbench/random.hpp"
#include "inferbench/split.hpp"

namespace inferbench {

enum class NegativeMethod { Rc, Rb, Pa, Qg };

NegativeMethod parse_method(std::string_view name);
std::string_view method_name(NegativeMethod m);

enum class SplitKind { Train, Valid, Test };
inline constexpr SplitKind kSplits[] = {SplitKind::Train, SplitKind::Valid, SplitKind::Test};
std::string_view split_name(SplitKind s);

struct NegativeSet {
  std::vector<Triple> triples;
  std::vector<std::string> tags;  // source of each triple: rc, rb, pa or subrule

  std::size_t size() const { return triples.size(); }
  void add(const Triple& t, std::string_view tag);
};

struct NegativeSets {
  NegativeMethod method = NegativeMethod::Pa;
  NegativeSet train;
  NegativeSet valid;
  NegativeSet test;
  bool shortfall = false;
  std::vector<std::string> warnings;
  /// Method-specific counters for the manifest (pool sizes, quotas).
  std::vector<std::pair<std::string, std::string>> notes;

  NegativeSet& operator[](SplitKind s);
  const NegativeSet& operator[](SplitKind s) const;
};

struct NegativeConfig {
  NegativeMethod method = NegativeMethod::Pa;
  std::uint64_t seed = 0;
  bool allow_shortfall = false;
  SplitRatio ratio;
  unsigned workers = 1;
};

const std::vector<Triple>& positives_of(const PositiveSets& p, SplitKind s);

/// Random object corruption: each positive (s,R,o) gets one (s,R,o') with o'
/// uniform over Consts(K); a type triple (e,type,t) gets (e',type,t). The
/// result is outside P_all and unused so far, retried 32 times before a
/// scan from a random offset.
NegativeSets gen_rc(const PositiveSets& positives, const KnowledgeGraph& kg,
                    const NegativeConfig& config);

/// Head predicates and support constants of the rules (the relevance pool).
struct RelevancePool {
  std::vector<PredicateId> relations;  // name order
  std::vector<PredicateId> types;
  std::vector<ConstantId> constants;  // Const_sup, name order

  static RelevancePool build(std::span<const RankedRule> rules, const KnowledgeGraph& kg,
                             unsigned workers = 1);
  /// |N_cand|
  std::uint64_t size() const;
  /// The i-th member of N_cand for i < size().
  Triple at(std::uint64_t i) const;
  bool contains(const Triple& t) const;
};

NegativeSets gen_rb(const PositiveSets& positives, std::span<const RankedRule> rules,
                    const KnowledgeGraph& kg, const NegativeConfig& config);

/// Subjects and objects of each relation, and the typed entities, in P_all.
/// The spans list them in name order.
class CorruptionContext {
 public:
  CorruptionContext(const TripleSet& p_all, const SymbolTable& symbols);

  std::span<const ConstantId> subjects(PredicateId r) const;
  std::span<const ConstantId> objects(PredicateId r) const;
  std::span<const ConstantId> typed() const { return typed_members_.by_name; }
  bool is_subject(PredicateId r, ConstantId c) const;
  bool is_object(PredicateId r, ConstantId c) const;
  bool is_typed(ConstantId c) const;
  const TripleSet& p_all() const { return p_all_; }

 private:
  const TripleSet& p_all_;
  struct Members {
    std::vector<ConstantId> by_name;
    std::vector<ConstantId> by_id;
  };
  static void normalise(Members& m, const NameOrder& order);
  static bool has(const Members& m, ConstantId c);

  std::unordered_map<std::uint32_t, Members> subjects_;
  std::unordered_map<std::uint32_t, Members> objects_;
  Members typed_members_;
};

/// C'_x: the position-aware corruptions of a set of conclusions C_x, kept
/// implicit. Members are never in P_all.
class PositionAwarePool {
 public:
  /// Above this many (conclusion, replacement) pairs, sampling works without
  /// listing the pool.
  static constexpr std::uint64_t kExplicitLimit = 1u << 22;

  PositionAwarePool(std::span<const Triple> conclusions, const CorruptionContext& context);

  bool contains(const Triple& t) const;
  /// All members, sorted by id.
  std::vector<Triple> enumerate() const;
  /// Number of (conclusion, replacement) pairs; an upper bound on the size.
  std::uint64_t generator_count() const { return total_; }

  /// Up to `count` distinct members outside `exclude`, uniformly without
  /// replacement. Fewer only when the pool runs out.
  std::vector<Triple> sample(std::size_t count, const TripleSet& exclude, Rng& rng,
                             const SymbolTable& symbols) const;

 private:
  std::uint64_t multiplicity(const Triple& t) const;
  Triple generate(std::uint64_t g) const;
  std::vector<Triple> sample_listed(std::size_t count, const TripleSet& exclude, Rng& rng,
                                    const SymbolTable& symbols) const;

  const CorruptionContext& context_;
  std::vector<Triple> conclusions_;
  TripleStore index_;
  std::vector<std::uint64_t> prefix_;  // prefix_[i] = generators before conclusion i
  std::uint64_t total_ = 0;
};

/// C_train = T_R(K) ∩ P_train, C_valid = P_valid, C_test = P_test.
struct ConclusionSets {
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
  const std::vector<Triple>& operator[](SplitKind s) const;
};
ConclusionSets conclusion_sets(const PositiveSets& positives, std::span<const RankedRule> rules,
                               const KnowledgeGraph& kg, unsigned workers = 1);

NegativeSets gen_pa(const PositiveSets& positives, std::span<const RankedRule> rules,
                    const KnowledgeGraph& kg, const NegativeConfig& config);

struct SubRules {
  std::vector<Rule> rules;  // R⁻, canonical text order
  std::vector<std::size_t> complex;  // indices into R of R_complex
};

/// Every safe rule obtained by deleting one or more (not all) positive body
/// atoms of a rule in R. Inequalities that lose a variable are dropped;
/// results equal to a rule of R are discarded.
SubRules derive_subrules(std::span<const RankedRule> rules, const SymbolTable& symbols);
SubRules derive_subrules(std::span<const Rule> rules, const SymbolTable& symbols);

/// ceil(complex * needed / total), the per-split quota before capping by
/// the available C⁻ triples.
std::size_t subrule_quota(std::size_t complex, std::size_t total, std::size_t needed);

NegativeSets gen_qg(const PositiveSets& positives, std::span<const RankedRule> rules,
                    const KnowledgeGraph& kg, const NegativeConfig& config);

NegativeSets generate_negatives(const PositiveSets& positives, std::span<const RankedRule> rules,
                                const KnowledgeGraph& kg, const NegativeConfig& config);

}  // namespace inferbench
