#include "inferbench/entailment.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "inferbench/engine.hpp"

namespace inferbench {
namespace {

// Constants compared by an inequality. Only these can make a derivation
// from distinct fresh constants fail once a variable is mapped onto them.
void inequality_constants(const Rule& rule, std::vector<ConstantId>& out) {
  for (const auto& a : rule.body) {
    if (!a.is_inequality()) continue;
    if (!a.first.is_variable()) out.push_back(a.first.constant_id());
    if (!a.second.is_variable()) out.push_back(a.second.constant_id());
  }
}

class Checker {
 public:
  Checker(std::span<const Rule> ruleset, const Rule& r) : ruleset_(ruleset), r_(r) {
    for (const auto& rule : ruleset) {
      inequality_constants(rule, constants_);
      generic_ = generic_ && !rule.has_inequalities();
    }
    std::sort(constants_.begin(), constants_.end());
    constants_.erase(std::unique(constants_.begin(), constants_.end()), constants_.end());
    block_of_.assign(r.variable_count(), 0);
    binding_.assign(r.variable_count(), kUnbound);
    used_.assign(constants_.size(), false);
  }

  bool run() {
    if (generic_) {
      // Without inequalities in the ruleset every derivation survives any
      // identification, so the most general freezing decides.
      std::iota(block_of_.begin(), block_of_.end(), 0u);
      block_value_.resize(block_of_.size());
      for (std::size_t b = 0; b < block_value_.size(); ++b) {
        block_value_[b] = ConstantId{kReservedConstantBase + static_cast<std::uint32_t>(b)};
      }
      return check();
    }
    return partition(0, 0);
  }

 private:
  // Assigns variable v to an existing block or opens a new one.
  bool partition(std::size_t v, std::uint32_t blocks) {
    if (v == block_of_.size()) {
      block_value_.assign(blocks, kUnbound);
      return assign_block(0);
    }
    for (std::uint32_t b = 0; b <= blocks; ++b) {
      block_of_[v] = b;
      if (!partition(v + 1, std::max(blocks, b + 1))) return false;
    }
    return true;
  }

  // Maps block b to a fresh constant or an unused rule constant.
  bool assign_block(std::size_t b) {
    if (b == block_value_.size()) return check();
    block_value_[b] = ConstantId{kReservedConstantBase + static_cast<std::uint32_t>(b)};
    if (!assign_block(b + 1)) return false;
    for (std::size_t c = 0; c < constants_.size(); ++c) {
      if (used_[c]) continue;
      used_[c] = true;
      block_value_[b] = constants_[c];
      const bool ok = assign_block(b + 1);
      used_[c] = false;
      if (!ok) return false;
    }
    return true;
  }

  // False iff this identification is a counterexample.
  bool check() {
    for (std::size_t v = 0; v < binding_.size(); ++v) binding_[v] = block_value_[block_of_[v]];
    auto value = [&](const Term& t) {
      return t.is_variable() ? binding_[t.var()] : t.constant_id();
    };
    std::vector<Triple> facts;
    for (const auto& a : r_.body) {
      if (a.is_inequality()) {
        if (value(a.first) == value(a.second)) return true;
      } else {
        facts.push_back(ground(a, binding_));
      }
    }
    const Triple goal = ground(r_.head, binding_);
    if (std::find(facts.begin(), facts.end(), goal) != facts.end()) return true;
    return materialise(ruleset_, facts, goal).contains(goal);
  }

  std::span<const Rule> ruleset_;
  const Rule& r_;
  bool generic_ = true;
  std::vector<ConstantId> constants_;
  std::vector<bool> used_;
  std::vector<std::uint32_t> block_of_;
  std::vector<ConstantId> block_value_;
  std::vector<ConstantId> binding_;
};

}  // namespace

bool entails(std::span<const Rule> ruleset, const Rule& r) {
  return Checker(ruleset, r).run();
}

}  // namespace inferbench
