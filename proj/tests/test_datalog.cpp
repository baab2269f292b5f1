#include <gtest/gtest.h>

#include "entailment_cases.hpp"
#include "inferbench/engine.hpp"
#include "inferbench/entailment.hpp"
#include "inferbench/error.hpp"
#include "support.hpp"

using namespace inferbench;
using namespace testing_support;

namespace {

std::vector<std::string> sorted_names(std::span<const Triple> ts, const SymbolTable& s) {
  return names(ts, s);
}

std::vector<std::string> sorted_names(const FactSet& ts, const SymbolTable& s) {
  std::vector<Triple> v(ts.begin(), ts.end());
  return names(v, s);
}

}  // namespace

TEST(Parse, Transitivity) {
  SymbolTable s;
  const auto r = parse_rule(kTransitivity, s);
  EXPECT_EQ(r.body.size(), 2u);
  EXPECT_EQ(r.variable_count(), 3u);
  EXPECT_EQ(r.head.kind, AtomKind::Relation);
  EXPECT_EQ(s.predicate_name(r.head.predicate), "IsColleague");
}

TEST(Parse, SymmetryHeadBound) {
  SymbolTable s;
  const auto r = parse_rule("(x,R,y) -> (y,R,x)", s);
  EXPECT_TRUE(is_safe(r));
  EXPECT_EQ(r.head.first.var(), r.body[0].second.var());
}

TEST(Parse, InequalityOnlyBodyIsUnsafe) {
  SymbolTable s;
  try {
    parse_rule("x != y -> (x,R,y)", s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Data);
  }
}

TEST(Parse, UnboundHeadVariableIsUnsafe) {
  SymbolTable s;
  EXPECT_THROW(parse_rule("(x,R,y) -> (x,R,z)", s), Error);
}

TEST(Parse, SyntaxErrorColumn) {
  SymbolTable s;
  try {
    parse_rule("(x,R,y) => (y,R,x)", s);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 8u);
  }
}

TEST(Parse, RoundTripThroughText) {
  SymbolTable s;
  for (const char* text : {"(x,R,y), (y,S,z), x != z -> (x,U,z)", "(x,type,Person) -> (x,R,<a>)",
                           "(x,R,<b>), (<b>,type,T) -> (x,type,T)"}) {
    const auto r = parse_rule(text, s);
    const auto again = parse_rule(to_string(r, s), s);
    EXPECT_EQ(canonical_text(r, s), canonical_text(again, s)) << text;
  }
}

TEST(Parse, ArrowFormat) {
  SymbolTable s;
  const auto a = parse_arrow_rule("0.91\t12\t11\tT(X,Y) <= R(X,A), S(A,Y)", s);
  const auto b = parse_rule("(x,R,a), (a,S,y) -> (x,T,y)", s);
  EXPECT_EQ(canonical_text(a, s), canonical_text(b, s));
  const auto c = parse_arrow_rule("T(X,paris) <= R(X,Y)", s);
  EXPECT_FALSE(c.head.second.is_variable());
}

TEST(Canonical, RenamingAndBodyOrder) {
  SymbolTable s;
  const auto a = parse_rule("(x,R,y), (y,S,z), x != z -> (x,T,z)", s);
  const auto b = parse_rule("(q,S,w), (p,R,q), w != p -> (p,T,w)", s);
  const auto c = parse_rule("(x,R,y), (y,S,z) -> (x,T,z)", s);
  const auto d = parse_rule("(x,S,y), (y,R,z), x != z -> (x,T,z)", s);
  EXPECT_EQ(canonical_text(a, s), canonical_text(b, s));
  EXPECT_NE(canonical_text(a, s), canonical_text(c, s));
  EXPECT_NE(canonical_text(a, s), canonical_text(d, s));
}

TEST(Witnesses, ColleagueTransitivity) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from(kFig1b, symbols);
  const auto r = parse_rule(kTransitivity, *symbols);
  std::vector<std::string> got;
  for (const auto& w : find_witnesses(r, kg)) {
    got.push_back(symbols->constant_name(w[0]) + "," + symbols->constant_name(w[1]) + "," +
                  symbols->constant_name(w[2]));
  }
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::string>{"Ada,Eve,Lucy", "Alex,Bob,John", "Harry,James,Tony"}));
  EXPECT_EQ(count_witnesses(r, kg), 3u);
}

TEST(Witnesses, EmptyKg) {
  auto symbols = fresh_symbols();
  const auto r = parse_rule(kTransitivity, *symbols);
  const auto kg = kg_from("", symbols);
  EXPECT_TRUE(find_witnesses(r, kg).empty());
  EXPECT_TRUE(apply_once(r, kg).empty());
}

TEST(Witnesses, InequalityFilters) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from("a\tR\ta\na\tR\tb\n", symbols);
  const auto r = parse_rule("(x,R,y), x != y -> (y,R,x)", *symbols);
  const auto w = find_witnesses(r, kg);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(symbols->constant_name(w[0][0]), "a");
  EXPECT_EQ(symbols->constant_name(w[0][1]), "b");
}

TEST(ApplyOnce, ColleagueConclusions) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from(kFig1b, symbols);
  const auto r = parse_rule(kTransitivity, *symbols);
  EXPECT_EQ(sorted_names(apply_once(r, kg), *symbols),
            (std::vector<std::string>{"Ada\tIsColleague\tLucy", "Alex\tIsColleague\tJohn",
                                      "Harry\tIsColleague\tTony"}));
}

TEST(ApplyOnce, GroundHead) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from("a\tR\tb\n", symbols);
  const auto r = parse_rule("(<a>,R,<b>) -> (<b>,S,<a>)", *symbols);
  EXPECT_EQ(sorted_names(apply_once(r, kg), *symbols), (std::vector<std::string>{"b\tS\ta"}));
}

TEST(ApplyOnce, DisjointHeadsAdd) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from("a\tR\tb\nb\tR\tc\n", symbols);
  const std::vector<Rule> rules = {parse_rule("(x,R,y) -> (y,S,x)", *symbols),
                                   parse_rule("(x,R,y) -> (x,T,y)", *symbols)};
  EXPECT_EQ(apply_once(rules, kg).size(),
            apply_once(rules[0], kg).size() + apply_once(rules[1], kg).size());
  const std::vector<Rule> one = {rules[0]};
  EXPECT_EQ(apply_once(one, kg), apply_once(rules[0], kg));
}

TEST(ApplyOnce, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    auto symbols = fresh_symbols();
    const auto kg = kg_from(random_kg_text(rng, {}, 80), symbols);
    const FactSet facts(kg.facts().begin(), kg.facts().end());
    std::vector<Rule> rules;
    FactSet union_oracle;
    for (int i = 0; i < 3; ++i) {
      rules.push_back(parse_rule(random_rule_text(rng, {}), *symbols));
      const auto expected = brute_apply(rules.back(), facts);
      union_oracle.insert(expected.begin(), expected.end());
      EXPECT_EQ(sorted_names(apply_once(rules.back(), kg), *symbols),
                sorted_names(expected, *symbols))
          << to_string(rules.back(), *symbols);
      std::uint64_t n = 0;
      brute_witnesses(rules.back(), facts, domain_of(facts, std::span<const Rule>(&rules.back(), 1)),
                      [&](const auto&) { ++n; });
      EXPECT_EQ(count_witnesses(rules.back(), kg), n);
    }
    EXPECT_EQ(sorted_names(apply_once(rules, kg), *symbols), sorted_names(union_oracle, *symbols));
  }
}

TEST(Derives, AgreesWithApplyOnce) {
  Rng rng(99);
  auto symbols = fresh_symbols();
  const auto kg = kg_from(random_kg_text(rng, {}, 60), symbols);
  for (int i = 0; i < 20; ++i) {
    const auto r = parse_rule(random_rule_text(rng, {}), *symbols);
    const auto heads = apply_once(r, kg);
    const std::set<Triple> set(heads.begin(), heads.end());
    for (int c1 = 0; c1 < 10; ++c1) {
      for (int c2 = 0; c2 < 10; ++c2) {
        if (r.head.kind != AtomKind::Relation) break;
        const auto t = Triple::relation(symbols->intern_constant(constant_name(c1)), r.head.predicate,
                                        symbols->intern_constant(constant_name(c2)));
        EXPECT_EQ(derives(r, kg.store(), t), set.contains(t));
      }
    }
  }
}

TEST(Materialise, ChainClosure) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from("a\tR\tb\nb\tR\tc\nc\tR\td\n", symbols);
  const std::vector<Rule> rules = {parse_rule("(x,R,y), (y,R,z) -> (x,R,z)", *symbols)};
  const auto m = materialise(rules, kg);
  EXPECT_EQ(m.size(), 6u);
}

TEST(Materialise, EmptyRuleSet) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from(kFig1b, symbols);
  const auto m = materialise(std::span<const Rule>{}, kg);
  EXPECT_EQ(names(m.facts(), *symbols), names(kg.facts(), *symbols));
}

TEST(Materialise, MatchesNaiveFixpoint) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(1000 + seed);
    auto symbols = fresh_symbols();
    const auto kg = kg_from(random_kg_text(rng, {}, 1 + static_cast<int>(uniform_below(rng, 120))),
                            symbols);
    std::vector<Rule> rules;
    const int n = 1 + static_cast<int>(uniform_below(rng, 5));
    for (int i = 0; i < n; ++i) rules.push_back(parse_rule(random_rule_text(rng, {}), *symbols));
    const auto expected = naive_fixpoint(rules, FactSet(kg.facts().begin(), kg.facts().end()));
    const auto got = materialise(rules, kg);
    EXPECT_EQ(names(got.facts(), *symbols), sorted_names(expected, *symbols)) << "seed " << seed;
  }
}

TEST(Materialise, GoalStopsEarlyButDerivesIt) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from("a\tR\tb\nb\tR\tc\nc\tR\td\nd\tR\te\n", symbols);
  const std::vector<Rule> rules = {parse_rule("(x,R,y), (y,R,z) -> (x,R,z)", *symbols)};
  const auto goal = rel(*symbols, "a", "R", "c");
  const auto store = materialise(rules, kg.facts(), goal);
  EXPECT_TRUE(store.contains(goal));
}

TEST(Entailment, CuratedCases) {
  for (const auto& c : entailment_cases()) {
    SymbolTable s;
    std::vector<Rule> ruleset;
    for (const auto& t : c.ruleset) ruleset.push_back(parse_rule(t, s));
    const auto r = parse_rule(c.rule, s);
    EXPECT_EQ(entails(ruleset, r), c.expected) << c.name;
  }
}

TEST(Entailment, VerdictsSurviveFalsification) {
  for (const auto& c : entailment_cases()) {
    SymbolTable s;
    std::vector<Rule> ruleset;
    for (const auto& t : c.ruleset) ruleset.push_back(parse_rule(t, s));
    const auto r = parse_rule(c.rule, s);
    const auto found = falsify(ruleset, r, s, c.expected ? 2000 : 20000, 5, true);
    if (c.expected) {
      EXPECT_EQ(found, 0u) << c.name;
    } else {
      EXPECT_GT(found, 0u) << c.name;
    }
  }
}

TEST(Entailment, Reflexive) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    SymbolTable s;
    const auto r = parse_rule(random_rule_text(rng, {}), s);
    const std::vector<Rule> self{r};
    EXPECT_TRUE(entails(self, r)) << to_string(r, s);
  }
}

TEST(Entailment, RandomPositivesHaveNoCounterexample) {
  Rng rng(11);
  const RandomShape shape{3, 2, 1};
  int positives = 0;
  for (int i = 0; i < 300 && positives < 25; ++i) {
    SymbolTable s;
    std::vector<Rule> ruleset;
    const int n = 1 + static_cast<int>(uniform_below(rng, 3));
    for (int j = 0; j < n; ++j) ruleset.push_back(parse_rule(random_rule_text(rng, shape, 2), s));
    const auto r = parse_rule(random_rule_text(rng, shape, 2), s);
    if (!entails(ruleset, r)) continue;
    ++positives;
    EXPECT_EQ(falsify(ruleset, r, s, 500, i, true), 0u) << to_string(r, s);
  }
  EXPECT_GT(positives, 0);
}
