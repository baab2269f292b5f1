#include <gtest/gtest.h>

#include "inferbench/error.hpp"
#include "support.hpp"

using namespace inferbench;
using namespace testing_support;

TEST(Kg, ColleagueGraphCounts) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from(kFig1b, symbols);
  const auto sig = signature(kg);
  EXPECT_EQ(kg.size(), 6u);
  EXPECT_EQ(sig.relations.size(), 1u);
  EXPECT_TRUE(sig.types.empty());
  // The six listed triples name nine people.
  EXPECT_EQ(sig.constants.size(), 9u);
  EXPECT_EQ(symbols->predicate_name(sig.relations[0]), "IsColleague");
}

TEST(Kg, EmptyInput) {
  const auto kg = kg_from("", fresh_symbols());
  const auto sig = signature(kg);
  EXPECT_EQ(kg.size(), 0u);
  EXPECT_TRUE(sig.types.empty() && sig.relations.empty() && sig.constants.empty());
}

TEST(Kg, RepeatedLineStoredOnce) {
  const auto kg = kg_from("a\tR\tb\na\tR\tb\nb\tR\tc\na\tR\tb\n", fresh_symbols());
  EXPECT_EQ(kg.size(), 2u);
  EXPECT_EQ(kg.duplicates_dropped(), 2u);
}

TEST(Kg, SingleTypeTriple) {
  auto symbols = fresh_symbols();
  const auto kg = kg_from("a\ttype\tPerson\n", symbols);
  const auto sig = signature(kg);
  ASSERT_EQ(sig.types.size(), 1u);
  EXPECT_EQ(symbols->predicate_name(sig.types[0]), "Person");
  EXPECT_TRUE(sig.relations.empty());
  ASSERT_EQ(sig.constants.size(), 1u);
  EXPECT_EQ(symbols->constant_name(sig.constants[0]), "a");
  EXPECT_TRUE(kg.facts()[0].is_type());
}

TEST(Kg, WrongArityReportsLine) {
  auto symbols = fresh_symbols();
  try {
    kg_from("a\tR\tb\na\tR\n", symbols);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Kg, NameUsedAsConstantAndPredicate) {
  try {
    kg_from("a\tR\tb\nR\tS\tc\n", fresh_symbols());
    FAIL() << "expected a conflict";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Data);
  }
}

TEST(Kg, RelationUsedAsType) {
  EXPECT_THROW(kg_from("a\tR\tb\nc\ttype\tR\n", fresh_symbols()), Error);
}

TEST(Kg, CarriageReturnsTolerated) {
  const auto kg = kg_from("a\tR\tb\r\n\nb\tR\tc\r\n", fresh_symbols());
  EXPECT_EQ(kg.size(), 2u);
}

TEST(Kg, CustomTypeMarker) {
  auto symbols = std::make_shared<SymbolTable>("rdf:type");
  const auto kg = kg_from("a\trdf:type\tPerson\na\ttype\tb\n", symbols);
  const auto sig = signature(kg);
  EXPECT_EQ(sig.types.size(), 1u);
  EXPECT_EQ(sig.relations.size(), 1u);
}

TEST(Kg, NameOrderIgnoresInterningOrder) {
  auto s1 = fresh_symbols();
  auto s2 = fresh_symbols();
  std::istringstream in1("b\tR\tc\na\tS\tz\na\ttype\tT\na\tR\tc\n");
  std::istringstream in2("a\tR\tc\na\ttype\tT\na\tS\tz\nb\tR\tc\n");
  auto t1 = read_triples(in1, *s1);
  auto t2 = read_triples(in2, *s2);
  sort_by_name(t1, *s1);
  sort_by_name(t2, *s2);
  std::vector<std::string> n1, n2;
  for (const auto& t : t1) n1.push_back(format_triple(t, *s1));
  for (const auto& t : t2) n2.push_back(format_triple(t, *s2));
  EXPECT_EQ(n1, n2);
  EXPECT_EQ(n1.front(), "a\tR\tc");
  EXPECT_EQ(n1[2], "a\ttype\tT");  // relation triples of a come first
}

TEST(Kg, RoundTripThroughFile) {
  auto dir = temp_dir("kg-roundtrip");
  auto symbols = fresh_symbols();
  const auto kg = kg_from("a\tR\tb\nb\ttype\tT\n", symbols);
  write_triples(dir / "k.txt", kg.facts(), *symbols);
  auto again = fresh_symbols();
  const auto kg2 = load_kg(dir / "k.txt", again);
  EXPECT_EQ(names(kg.facts(), *symbols), names(kg2.facts(), *again));
}

TEST(TripleStore, IndexesAgreeWithScan) {
  Rng rng(7);
  auto symbols = fresh_symbols();
  const auto kg = kg_from(random_kg_text(rng, {}, 120), symbols);
  const auto& store = kg.store();
  for (std::uint32_t p = 0; p < symbols->predicate_count(); ++p) {
    const PredicateId pid{p};
    std::size_t n = 0;
    for (const auto& t : kg.facts()) n += t.predicate == pid;
    EXPECT_EQ(store.with_predicate(pid).size(), n);
    for (std::uint32_t c = 0; c < symbols->constant_count(); ++c) {
      const ConstantId cid{c};
      std::size_t ns = 0, no = 0;
      for (const auto& t : kg.facts()) {
        ns += t.predicate == pid && t.subject == cid;
        no += t.predicate == pid && !t.is_type() && t.object == cid;
      }
      EXPECT_EQ(store.with_predicate_subject(pid, cid).size(), ns);
      EXPECT_EQ(store.with_predicate_object(pid, cid).size(), no);
    }
  }
}
