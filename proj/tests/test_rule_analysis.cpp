#include <gtest/gtest.h>

#include <numeric>

#include "inferbench/error.hpp"
#include "inferbench/rule_analysis.hpp"
#include "rule_oracles.hpp"

using namespace inferbench;
using namespace testing_support;

namespace {

std::vector<Rule> parse_all(std::initializer_list<const char*> texts, SymbolTable& s) {
  std::vector<Rule> out;
  for (const auto* t : texts) out.push_back(parse_rule(t, s));
  return out;
}

}  // namespace

TEST(EpsilonEnt, SameSets) {
  SymbolTable s;
  const auto bench = parse_all({"(x,R,y) -> (y,R,x)", "(x,R,y), (y,S,z), x != z -> (x,T,z)"}, s);
  EXPECT_EQ(epsilon_ent(bench, bench), 100.0);
  EXPECT_EQ(epsilon_cont(bench, bench, s), 100.0);
}

TEST(EpsilonEnt, SubRuleEntailsIntersection) {
  SymbolTable s;
  const auto rule2 = parse_all({"(x,IsParent,y), (x,GivesBirth,y) -> (x,IsMother,y)"}, s);
  const auto rule3 = parse_all({"(x,IsParent,y) -> (x,IsMother,y)"}, s);
  EXPECT_EQ(epsilon_ent(rule2, rule3), 100.0);
  EXPECT_EQ(epsilon_cont(rule2, rule3, s), 0.0);
  EXPECT_EQ(epsilon_ent(rule3, rule2), 0.0);
  EXPECT_EQ(epsilon_cont(rule3, rule2, s), 0.0);
}

TEST(EpsilonCont, RenamedAndReordered) {
  SymbolTable s;
  const auto bench = parse_all({"(x,R,y), (y,S,z), x != z -> (x,T,z)"}, s);
  const auto sys = parse_all({"(b,S,c), (a,R,b), c != a -> (a,T,c)"}, s);
  EXPECT_EQ(epsilon_cont(bench, sys, s), 100.0);
}

TEST(EpsilonCont, PartialCounts) {
  SymbolTable s;
  const auto bench = parse_all({"(x,R,y) -> (y,R,x)", "(x,R,y) -> (x,S,y)", "(x,S,y) -> (x,T,y)",
                                "(x,T,y) -> (y,T,x)"},
                               s);
  const auto sys = parse_all({"(a,R,b) -> (b,R,a)"}, s);
  EXPECT_EQ(epsilon_cont(bench, sys, s), 25.0);
}

TEST(Epsilon, EmptyBenchIsError) {
  SymbolTable s;
  const auto sys = parse_all({"(x,R,y) -> (y,R,x)"}, s);
  try {
    epsilon_ent({}, sys);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Data);
  }
  EXPECT_THROW(epsilon_cont({}, sys, s), Error);
  EXPECT_THROW(compare_rules({}, sys, s), Error);
}

TEST(Compare, SubRuleOnlySystemSignature) {
  SymbolTable s;
  const auto bench = parse_all({"(x,A,y), (x,B,y) -> (x,C,y)", "(x,D,y), (x,E,y) -> (x,F,y)",
                                "(x,A,z), (y,B,z), x != y -> (x,G,y)"},
                               s);
  const auto sys = parse_all({"(x,A,y) -> (x,C,y)", "(x,E,y) -> (x,F,y)",
                                   "(x,A,z), (y,B,z) -> (x,G,y)"},
                                  s);
  const auto report = compare_rules(bench, sys, s, 2);
  EXPECT_EQ(report.epsilon_ent, 100.0);
  EXPECT_EQ(report.epsilon_cont, 0.0);
  ASSERT_EQ(report.verdicts.size(), 3u);
  for (const auto& v : report.verdicts) {
    EXPECT_TRUE(v.entailed);
    EXPECT_FALSE(v.contained);
  }
  const auto text = format_comparison(report);
  EXPECT_NE(text.find("epsilon_ent=100.0"), std::string::npos) << text;
  EXPECT_NE(text.find("epsilon_cont=0.0"), std::string::npos) << text;
}

TEST(Compare, RandomPairsAgainstOracles) {
  Rng rng(8);
  const RandomShape shape{4, 3, 1};
  for (int i = 0; i < 100; ++i) {
    SymbolTable s;
    std::vector<Rule> bench, sys;
    const auto nb = 1 + uniform_below(rng, 20);
    for (std::size_t j = 0; j < nb; ++j) bench.push_back(parse_rule(random_rule_text(rng, shape), s));
    for (const auto& r : bench) {
      if (uniform_below(rng, 3) == 0) sys.push_back(scramble(r, rng));
    }
    const auto extra = uniform_below(rng, 10);
    for (std::size_t j = 0; j < extra; ++j) sys.push_back(parse_rule(random_rule_text(rng, shape), s));
    shuffle(sys, rng);
    sys.resize(std::min<std::size_t>(sys.size(), 20));

    const auto report = compare_rules(bench, sys, s);
    EXPECT_LE(report.epsilon_cont, report.epsilon_ent);
    std::size_t contained = 0;
    for (std::size_t j = 0; j < bench.size(); ++j) {
      bool iso = false;
      for (const auto& q : sys) iso = iso || isomorphic(bench[j], q);
      contained += iso;
      EXPECT_EQ(report.verdicts[j].contained, iso) << to_string(bench[j], s);
      if (report.verdicts[j].contained) EXPECT_TRUE(report.verdicts[j].entailed);
    }
    EXPECT_DOUBLE_EQ(report.epsilon_cont, 100.0 * contained / bench.size());

    // Reordering either side changes nothing.
    auto bench2 = bench;
    auto sys2 = sys;
    shuffle(bench2, rng);
    shuffle(sys2, rng);
    const auto again = compare_rules(bench2, sys2, s);
    EXPECT_EQ(again.epsilon_ent, report.epsilon_ent);
    EXPECT_EQ(again.epsilon_cont, report.epsilon_cont);
  }
}
