#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "inferbench/kg.hpp"
#include "inferbench/pattern.hpp"
#include "inferbench/random.hpp"

namespace inferbench {

using TripleSet = std::unordered_set<Triple, TripleHash>;

struct SplitRatio {
  std::uint32_t train = 8;
  std::uint32_t valid = 1;
  std::uint32_t test = 1;

  /// "a:b:c" with non-negative integers and a positive sum.
  static SplitRatio parse(std::string_view text);
  std::string to_string() const;
  std::uint32_t sum() const { return train + valid + test; }
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;
};

/// valid = floor(n*b/sum), test = floor(n*c/sum); train takes the rest.
SplitSizes split_sizes(std::size_t n, SplitRatio ratio);

/// T_r(K) \ K in name order.
std::vector<Triple> new_conclusions(const Rule& rule, const KnowledgeGraph& kg);

/// min(k2, |T_r(K) \ K|) conclusions drawn uniformly without replacement,
/// in draw order.
std::vector<Triple> sample_conclusions(const Rule& rule, const KnowledgeGraph& kg,
                                       std::size_t k2, Rng& rng);

struct PerRuleSplit {
  std::size_t rule = 0;  // index into the rule list
  std::size_t available = 0;  // |T_r(K) \ K|
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
};

/// Shuffles `sampled` and cuts it by split_sizes.
PerRuleSplit split_per_rule(std::vector<Triple> sampled, SplitRatio ratio, Rng& rng);

struct PositiveSets {
  std::vector<Triple> train;  // each set in name order
  std::vector<Triple> valid;
  std::vector<Triple> test;
  /// Rules (indices) whose sample contained the triple.
  std::unordered_map<Triple, std::vector<std::size_t>, TripleHash> provenance;

  TripleSet all() const;
};

/// P_train = K plus every per-rule train part; P_valid = valid parts minus
/// P_train; P_test = test parts minus P_train and P_valid.
PositiveSets assemble(const KnowledgeGraph& kg, std::span<const PerRuleSplit> splits);

struct PositiveBuild {
  PositiveSets positives;
  std::vector<PerRuleSplit> per_rule;
  std::vector<std::string> warnings;
};

/// Samples and splits every rule with a stream keyed by (seed, canonical
/// rule text), then assembles.
PositiveBuild build_positive_sets(const KnowledgeGraph& kg, std::span<const RankedRule> rules,
                                  std::size_t k2, SplitRatio ratio, std::uint64_t seed,
                                  unsigned workers = 1);

/// Triples of P_valid and P_test that no rule derives from P_train alone.
std::vector<Triple> unwitnessed(const PositiveSets& sets, std::span<const RankedRule> rules);

/// Whether Sig(P_valid) and Sig(P_test) lie within Sig(P_train).
bool signature_contained(const PositiveSets& sets);

}  // namespace inferbench
