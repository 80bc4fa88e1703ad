#include <random>

#include "crvsat/branching.hpp"
#include "crvsat/generators.hpp"
#include "crvsat/solver.hpp"
#include "gtest/gtest.h"
#include "oracle.hpp"

using namespace crvsat;

namespace {

const auto all_free = [](Var) { return true; };

ConflictEvent event(std::uint32_t lbd, LevelSet levels,
                    std::vector<std::pair<std::uint32_t, Var>> dvars = {}) {
  ConflictEvent e;
  e.lbd = lbd;
  e.reason_level_set = std::move(levels);
  e.level_decision_vars = std::move(dvars);
  return e;
}

DecisionRecord mc_record(std::uint32_t min_lbd, LevelSet common) {
  std::vector<std::pair<std::uint32_t, Var>> dvars;
  for (std::uint32_t dl : common) {
    if (dl > 0) dvars.emplace_back(dl, 100 + dl);
  }
  DecisionRecord r;
  LevelSet first = common, second = common;
  first.push_back(40);
  second.push_back(41);
  r.conflicts.push_back(event(min_lbd + 2, first, dvars));
  auto dv2 = dvars;
  dv2.emplace_back(41, 141);
  r.conflicts.push_back(event(min_lbd, second, dv2));
  return r;
}

}  // namespace

TEST(ActivityTest, BumpFromZero) {
  ActivityState s;
  s.resize(3);
  s.bump(2);
  EXPECT_DOUBLE_EQ(s.activity(2), 1.0);
  EXPECT_DOUBLE_EQ(s.activity(1), 0.0);
  s.decay();
  EXPECT_DOUBLE_EQ(s.increment(), 1.0 / 0.95);
  s.bump(2);
  EXPECT_DOUBLE_EQ(s.activity(2), 1.0 + 1.0 / 0.95);
}

TEST(ActivityTest, RescalePreservesOrder) {
  ActivityState s;
  s.resize(4);
  for (Var v = 1; v <= 4; ++v) s.make_free(v);
  s.set_activity(1, 9e99);
  s.set_activity(2, 5e99);
  s.set_activity(3, 1e99);
  while (s.increment() < 2e99) s.decay();
  const double inc = s.increment();
  s.bump(1);
  EXPECT_LT(s.activity(1), 1e100);
  EXPECT_NEAR(s.activity(1), (9e99 + inc) * 1e-100, 1e-12);
  EXPECT_NEAR(s.activity(2), 0.5, 1e-12);
  EXPECT_NEAR(s.increment(), inc * 1e-100, 1e-12);
  EXPECT_GT(s.activity(1), s.activity(2));
  EXPECT_GT(s.activity(2), s.activity(3));
  EXPECT_GT(s.activity(3), s.activity(4));
  EXPECT_EQ(s.peek_free(all_free), 1u);
  EXPECT_TRUE(s.order().is_heap());
}

TEST(ActivityTest, PeekFreeSkipsAssigned) {
  ActivityState s;
  s.resize(3);
  for (Var v = 1; v <= 3; ++v) s.make_free(v);
  s.set_activity(1, 3);
  s.set_activity(2, 2);
  s.set_activity(3, 1);
  EXPECT_EQ(s.peek_free([](Var v) { return v != 1; }), 2u);
  EXPECT_EQ(s.peek_free([](Var) { return false; }), 0u);
}

TEST(DecisionVarTest, SnapshotLookup) {
  const ConflictEvent e = event(3, {2, 5}, {{2, 7}, {5, 11}});
  EXPECT_EQ(e.decision_var_at(2), 7u);
  EXPECT_EQ(e.decision_var_at(5), 11u);
  EXPECT_FALSE(e.decision_var_at(3).has_value());
}

TEST(DetectPoorCrvTest, FlagsCommonLevelDecisions) {
  const DecisionRecord r = mc_record(5, {3, 9});
  PoorCrvFlags flags;
  flags.resize(200);
  EXPECT_EQ(detect_poor_crv(r, 4.2, flags), 2u);
  EXPECT_TRUE(flags.test(103));
  EXPECT_TRUE(flags.test(109));
  EXPECT_EQ(flags.count(), 2u);
  // Already flagged variables are not counted again.
  EXPECT_EQ(detect_poor_crv(r, 4.2, flags), 0u);
}

TEST(DetectPoorCrvTest, GoodDecisionFlagsNothing) {
  PoorCrvFlags flags;
  flags.resize(200);
  EXPECT_EQ(detect_poor_crv(mc_record(3, {3, 9}), 4.2, flags), 0u);
  EXPECT_EQ(detect_poor_crv(mc_record(4, {3, 9}), 4.0, flags), 0u);
  EXPECT_EQ(flags.count(), 0u);
}

TEST(DetectPoorCrvTest, EmptyCommonSetFlagsNothing) {
  PoorCrvFlags flags;
  flags.resize(200);
  EXPECT_EQ(detect_poor_crv(mc_record(5, {}), 4.2, flags), 0u);
  EXPECT_EQ(flags.count(), 0u);
}

TEST(DetectPoorCrvTest, LevelZeroIsSkipped) {
  PoorCrvFlags flags;
  flags.resize(200);
  EXPECT_EQ(detect_poor_crv(mc_record(5, {0, 6}), 1.0, flags), 1u);
  EXPECT_TRUE(flags.test(106));
}

TEST(DetectPoorCrvTest, RequiresMultiConflictDecision) {
  DecisionRecord r;
  r.conflicts.push_back(event(9, {1}, {{1, 1}}));
  PoorCrvFlags flags;
  flags.resize(2);
  EXPECT_THROW(detect_poor_crv(r, 1.0, flags), ContractViolation);
}

TEST(DetectPoorCrvTest, EmptyWindowIsNoOp) {
  PoorCrvFlags flags;
  flags.resize(200);
  EXPECT_EQ(detect_poor_crv(mc_record(5, {3}), LbdWindow(50), flags), 0u);
}

TEST(LbdWindowTest, MeanOverMostRecentK) {
  LbdWindow w(50);
  EXPECT_FALSE(w.mean().has_value());
  for (std::uint32_t i = 1; i <= 60; ++i) w.push(i);
  EXPECT_EQ(w.size(), 50u);
  EXPECT_DOUBLE_EQ(*w.mean(), 35.5);  // mean of 11..60

  LbdWindow small(50);
  for (std::uint32_t i : {2u, 4u, 9u}) small.push(i);
  EXPECT_DOUBLE_EQ(*small.mean(), 5.0);
}

TEST(LbdWindowTest, MatchesNaiveMean) {
  std::mt19937 rng(4);
  for (std::uint32_t k : {1u, 3u, 50u}) {
    LbdWindow w(k);
    std::vector<std::uint32_t> all;
    for (int i = 0; i < 300; ++i) {
      all.push_back(1 + rng() % 30);
      w.push(all.back());
      const std::size_t from = all.size() > k ? all.size() - k : 0;
      double sum = 0;
      for (std::size_t j = from; j < all.size(); ++j) sum += all[j];
      ASSERT_DOUBLE_EQ(*w.mean(), sum / double(all.size() - from));
    }
  }
}

TEST(CrvrBranchTest, FlaggedTopLosesTenPercent) {
  ActivityState s;
  s.resize(3);
  for (Var v = 1; v <= 3; ++v) s.make_free(v);
  s.set_activity(1, 10.0);
  s.set_activity(2, 9.5);
  s.set_activity(3, 1.0);
  PoorCrvFlags flags;
  flags.resize(3);
  flags.set(1);
  std::uint64_t reductions = 0;
  EXPECT_EQ(crvr_branch(s, flags, 0.1, all_free, &reductions), 2u);
  EXPECT_DOUBLE_EQ(s.activity(1), 9.0);
  EXPECT_FALSE(flags.test(1));
  EXPECT_EQ(reductions, 1u);
}

TEST(CrvrBranchTest, ReducedVariableMayStillWin) {
  ActivityState s;
  s.resize(2);
  for (Var v = 1; v <= 2; ++v) s.make_free(v);
  s.set_activity(1, 10.0);
  s.set_activity(2, 5.0);
  PoorCrvFlags flags;
  flags.resize(2);
  flags.set(1);
  EXPECT_EQ(crvr_branch(s, flags, 0.1, all_free), 1u);
  EXPECT_DOUBLE_EQ(s.activity(1), 9.0);
}

TEST(CrvrBranchTest, NoFreeVariableIsContractViolation) {
  ActivityState s;
  s.resize(2);
  PoorCrvFlags flags;
  flags.resize(2);
  EXPECT_THROW(crvr_branch(s, flags, 0.1, all_free), ContractViolation);
}

TEST(CrvrBranchTest, NeverReturnsFlaggedAndTerminates) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const Var n = 1 + rng() % 40;
    ActivityState s;
    s.resize(n);
    PoorCrvFlags flags;
    flags.resize(n);
    std::vector<bool> free(n + 1);
    bool any = false;
    for (Var v = 1; v <= n; ++v) {
      s.make_free(v);
      s.set_activity(v, static_cast<double>(rng() % 100));
      if (rng() % 2) flags.set(v);
      free[v] = rng() % 4 != 0;
      any |= free[v];
    }
    if (!any) continue;
    const std::size_t flagged_before = flags.count();
    std::uint64_t reductions = 0;
    const Var y = crvr_branch(s, flags, 0.1, [&](Var v) { return bool(free[v]); }, &reductions);
    ASSERT_TRUE(free[y]);
    ASSERT_FALSE(flags.test(y));
    ASSERT_LE(reductions, flagged_before);
    ASSERT_LE(reductions, n);
    // y is the best free variable once the reductions are applied.
    for (Var v = 1; v <= n; ++v) {
      if (free[v] && v != y && !flags.test(v)) {
        ASSERT_GE(s.activity(y), s.activity(v));
      }
    }
  }
}

TEST(SeedTest, ZeroSeedLeavesActivitiesAtZero) {
  ActivityState s;
  s.resize(10);
  seed_activities(s, 0);
  for (Var v = 1; v <= 10; ++v) EXPECT_EQ(s.activity(v), 0.0);
}

TEST(SeedTest, SeededActivitiesAreSmallAndReproducible) {
  ActivityState a, b;
  a.resize(50);
  b.resize(50);
  seed_activities(a, 42);
  seed_activities(b, 42);
  bool any_nonzero = false;
  for (Var v = 1; v <= 50; ++v) {
    EXPECT_GE(a.activity(v), 0.0);
    EXPECT_LT(a.activity(v), 1e-5);
    EXPECT_EQ(a.activity(v), b.activity(v));
    any_nonzero |= a.activity(v) > 0.0;
  }
  EXPECT_TRUE(any_nonzero);
}

// With CRVR off the CRVR-capable solver must take exactly the decisions of
// the plain activity solver.
TEST(CrvrSolverTest, DisabledMatchesPlainVsidsTrace) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Formula f = gen::random_ksat(80, 344, 3, 500 + seed);
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.record_decisions = true;
    Solver with(cfg);
    VsidsSolver plain(cfg);
    const auto a = with.solve(f);
    const auto b = plain.solve(f);
    ASSERT_EQ(a.outcome, b.outcome);
    ASSERT_EQ(a.decisions, b.decisions) << "seed " << seed;
    ASSERT_GT(a.decisions.size(), 0u);
    EXPECT_EQ(a.stats.crv_flags, 0u);
    EXPECT_EQ(a.stats.crv_reductions, 0u);
  }
}

TEST(CrvrSolverTest, EnabledStaysSound) {
  std::uint64_t flags = 0, reductions = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Formula f = gen::random_ksat(22, 94, 3, 9000 + i);
    SolverConfig cfg;
    cfg.crvr_enabled = true;
    cfg.check_invariants = true;
    const auto r = solve(f, cfg);
    ASSERT_EQ(r.outcome, oracle::brute_force_sat(f) ? Outcome::Sat : Outcome::Unsat);
    ASSERT_EQ(r.stats.invariant_violations, 0u);
    ASSERT_LE(r.stats.crv_flags, r.stats.poor_mc_decisions * f.num_vars);
    flags += r.stats.crv_flags;
    reductions += r.stats.crv_reductions;
  }
  EXPECT_GT(flags, 0u);
  EXPECT_GT(reductions, 0u);
}

TEST(CrvrSolverTest, ThetaWindowFollowsLearnedClauses) {
  SolverConfig cfg;
  cfg.crvr_enabled = true;
  cfg.crvr_k = 7;
  Solver s(cfg);
  s.solve(gen::pigeonhole(6, 5));
  const LbdWindow& w = s.brancher().window();
  EXPECT_EQ(w.capacity(), 7u);
  EXPECT_EQ(w.size(), std::min<std::size_t>(7, s.num_conflicts()));
}
