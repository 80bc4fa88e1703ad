#include <random>

#include "crvsat/cnf.hpp"
#include "crvsat/generators.hpp"
#include "gtest/gtest.h"

using namespace crvsat;

namespace {

std::vector<std::vector<long>> as_ints(const Formula& f) {
  std::vector<std::vector<long>> out;
  for (const auto& c : f.clauses) {
    std::vector<long> lits;
    for (Literal l : c) lits.push_back(l.to_dimacs());
    out.push_back(lits);
  }
  return out;
}

}  // namespace

TEST(LiteralTest, NegationIsInvolution) {
  for (long x : {1L, -1L, 7L, -42L}) {
    const Literal l = Literal::from_dimacs(x);
    EXPECT_EQ(~~l, l);
    EXPECT_EQ((~l).to_dimacs(), -x);
    EXPECT_EQ(l.var(), static_cast<Var>(std::labs(x)));
  }
}

TEST(ClauseTest, DeduplicatesAndFlagsTautology) {
  Clause c = make_clause({1, -2, 1, 3});
  EXPECT_EQ(c.size(), 3u);
  EXPECT_FALSE(c.tautology);
  Clause t = make_clause({1, -1, 2});
  EXPECT_TRUE(t.tautology);
}

TEST(ParseDimacsTest, ReadsClauses) {
  const Formula f = parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0\n");
  EXPECT_EQ(f.num_vars, 3u);
  EXPECT_EQ(as_ints(f), (std::vector<std::vector<long>>{{1, -2}, {2, 3}}));
}

TEST(ParseDimacsTest, SkipsComments) {
  const Formula f = parse_dimacs("c comment\np cnf 1 1\n1 0\n");
  EXPECT_EQ(f.num_vars, 1u);
  EXPECT_EQ(as_ints(f), (std::vector<std::vector<long>>{{1}}));
}

TEST(ParseDimacsTest, RejectsVariableAboveHeader) {
  try {
    parse_dimacs("p cnf 2 1\n3 0\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("variable 3 exceeds declared 2"), std::string::npos);
  }
}

TEST(ParseDimacsTest, RejectsMalformedHeader) {
  EXPECT_THROW(parse_dimacs("p cnf x 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p dnf 1 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("1 0\n"), ParseError);
}

TEST(ParseDimacsTest, MissingTerminatorNamesLine) {
  try {
    parse_dimacs("p cnf 3 2\n1 2 0\n\n-3 2\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(ParseDimacsTest, ClauseCountMismatchWarns) {
  std::vector<std::string> warnings;
  const Formula f = parse_dimacs("p cnf 2 3\n1 0\n2 0\n", &warnings);
  EXPECT_EQ(f.clauses.size(), 2u);
  ASSERT_EQ(warnings.size(), 1u);
}

TEST(ParseDimacsTest, ClausesMaySpanLinesAndSatlibTrailer) {
  const Formula f = parse_dimacs("p cnf 3 2\n1 2\n 3 0 -1\n0\n%\n0\n");
  EXPECT_EQ(as_ints(f), (std::vector<std::vector<long>>{{1, 2, 3}, {-1}}));
}

TEST(ParseDimacsTest, EmptyClauseMakesFormulaRefuted) {
  const Formula f = parse_dimacs("p cnf 1 2\n1 0\n0\n");
  EXPECT_TRUE(f.has_empty_clause());
}

TEST(CheckModelTest, Examples) {
  Formula f;
  f.num_vars = 2;
  f.clauses.push_back(make_clause({1, -2}));
  Model m(2);
  m.set(1, true);
  m.set(2, true);
  EXPECT_TRUE(check_model(f, m));

  Formula contradiction;
  contradiction.num_vars = 1;
  contradiction.clauses = {make_clause({1}), make_clause({-1})};
  for (bool v : {false, true}) {
    Model m1(1);
    m1.set(1, v);
    EXPECT_FALSE(check_model(contradiction, m1));
  }

  EXPECT_TRUE(check_model(Formula{}, Model(0)));
}

TEST(CheckModelTest, PartialModelIsContractViolation) {
  Formula f;
  f.num_vars = 3;
  EXPECT_THROW(check_model(f, Model(2)), ContractViolation);
}

// Serializing and re-parsing preserves every clause (up to literal order);
// check_model stays true when clauses are removed.
TEST(CnfPropertyTest, RoundTripAndMonotoneModelCheck) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Var n = 1 + rng() % 12;
    Formula f = gen::random_ksat(n, rng() % 30, std::min<unsigned>(n, 1 + rng() % 4), rng());
    const Formula back = parse_dimacs(to_dimacs(f));
    ASSERT_EQ(back.num_vars, f.num_vars);
    auto a = as_ints(f), b = as_ints(back);
    for (auto& c : a) std::sort(c.begin(), c.end());
    for (auto& c : b) std::sort(c.begin(), c.end());
    ASSERT_EQ(a, b);

    Model m(n);
    for (Var v = 1; v <= n; ++v) m.set(v, rng() & 1);
    if (!check_model(f, m)) continue;
    Formula sub = f;
    while (!sub.clauses.empty()) {
      sub.clauses.erase(sub.clauses.begin() + static_cast<long>(rng() % sub.clauses.size()));
      ASSERT_TRUE(check_model(sub, m));
    }
  }
}
