// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "bafsynth/error.hpp"
#include "bafsynth/maxsat.hpp"
#include "test_support.hpp"

namespace bafsynth {
namespace {

TEST(MaxSat, GrowsFromHardUnit) {
  MaxSatInstance inst;
  inst.hard = {make_clause({3})};
  inst.soft = {make_clause({-3}), make_clause({3, -4}), make_clause({4})};
  MaxSatResult r = solve_partial_maxsat(inst);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.satisfied_soft, (ClauseIndexSet{1, 2}));
  EXPECT_TRUE(r.model.value(3));
  EXPECT_TRUE(r.model.value(4));
}

TEST(MaxSat, HardUnsatisfiable) {
  MaxSatInstance inst;
  inst.hard = {make_clause({1}), make_clause({-1})};
  inst.soft = {make_clause({2})};
  EXPECT_FALSE(solve_partial_maxsat(inst).optimal());
  EXPECT_FALSE(solve_partial_maxsat(inst, MaxSatStrategy::kMaximal).optimal());
}

TEST(MaxSat, NoSofts) {
  MaxSatInstance inst;
  inst.hard = {make_clause({1, 2})};
  inst.variables = {5};
  MaxSatResult r = solve_partial_maxsat(inst);
  ASSERT_TRUE(r.optimal());
  EXPECT_TRUE(r.satisfied_soft.empty());
  EXPECT_TRUE(r.model.defines(5));
  EXPECT_TRUE(r.model.satisfies(make_clause({1, 2})));
}

TEST(MaxSat, EmptySoftIsNeverSatisfied) {
  MaxSatInstance inst;
  inst.soft = {Clause{}, make_clause({1})};
  MaxSatResult r = solve_partial_maxsat(inst);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.satisfied_soft, ClauseIndexSet{1});
}

TEST(MaxSat, MaximalCanBeBelowMaximum) {
  // Index-order greedy takes soft 0 (x1) and then cannot add the two
  // softs that need -x1.
  MaxSatInstance inst;
  inst.soft = {make_clause({1}), make_clause({-1}), make_clause({-1, 2}), make_clause({-1, -2})};
  MaxSatResult greedy = solve_partial_maxsat(inst, MaxSatStrategy::kMaximal);
  MaxSatResult best = solve_partial_maxsat(inst, MaxSatStrategy::kMaximum);
  ASSERT_TRUE(greedy.optimal());
  ASSERT_TRUE(best.optimal());
  EXPECT_EQ(best.satisfied_soft.size(), 3u);
  EXPECT_LE(greedy.satisfied_soft.size(), best.satisfied_soft.size());
}

struct RandomInstance {
  unsigned vars;
  std::vector<testing::IntClause> hard;
  std::vector<testing::IntClause> soft;
  MaxSatInstance instance;
};

RandomInstance random_instance(std::mt19937_64& rng) {
  RandomInstance r;
  r.vars = 1 + rng() % 10;
  r.hard = testing::random_cnf(rng, r.vars, static_cast<unsigned>(rng() % 8), 3);
  r.soft = testing::random_cnf(rng, r.vars, static_cast<unsigned>(rng() % 11), 3);
  r.instance.hard = testing::to_clauses(r.hard);
  r.instance.soft = testing::to_clauses(r.soft);
  for (Var v = 1; v <= r.vars; ++v) r.instance.variables.push_back(v);
  return r;
}

std::uint64_t word_of(const Assignment& a, unsigned vars) {
  std::uint64_t w = 0;
  for (Var v = 1; v <= vars; ++v)
    if (a.value(v)) w |= std::uint64_t{1} << (v - 1);
  return w;
}

TEST(MaxSatProperties, OptimumMatchesEnumeration) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    RandomInstance r = random_instance(rng);
    auto expected = testing::oracle_maxsat(r.vars, r.hard, r.soft);
    MaxSatResult got = solve_partial_maxsat(r.instance);
    ASSERT_EQ(got.optimal(), expected.has_value()) << "trial " << trial;
    if (!expected) continue;
    EXPECT_EQ(got.satisfied_soft.size(), *expected) << "trial " << trial;
    const std::uint64_t w = word_of(got.model, r.vars);
    EXPECT_TRUE(testing::oracle_cnf_true(r.hard, w));
    for (std::size_t i = 0; i < r.soft.size(); ++i)
      EXPECT_EQ(got.satisfied_soft.contains(i), testing::oracle_clause_true(r.soft[i], w));
  }
}

TEST(MaxSatProperties, MaximalStrategyIsInclusionMaximal) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    RandomInstance r = random_instance(rng);
    MaxSatResult got = solve_partial_maxsat(r.instance, MaxSatStrategy::kMaximal);
    if (!got.optimal()) {
      EXPECT_FALSE(testing::oracle_maxsat(r.vars, r.hard, r.soft).has_value());
      continue;
    }
    const std::uint64_t w = word_of(got.model, r.vars);
    EXPECT_TRUE(testing::oracle_cnf_true(r.hard, w));
    for (std::size_t i = 0; i < r.soft.size(); ++i) {
      EXPECT_EQ(got.satisfied_soft.contains(i), testing::oracle_clause_true(r.soft[i], w));
      if (got.satisfied_soft.contains(i)) continue;
      // Adding any missing soft must make the set infeasible.
      std::vector<testing::IntClause> with = r.hard;
      for (std::size_t j : got.satisfied_soft) with.push_back(r.soft[j]);
      with.push_back(r.soft[i]);
      EXPECT_FALSE(testing::oracle_satisfiable(r.vars, with)) << "trial " << trial << " soft " << i;
    }
  }
}

}  // namespace
}  // namespace bafsynth
