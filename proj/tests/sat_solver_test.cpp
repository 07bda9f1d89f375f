// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <sstream>
#include <stop_token>

#include <gtest/gtest.h>

#include "bafsynth/error.hpp"
#include "bafsynth/graph.hpp"
#include "bafsynth/sat_solver.hpp"
#include "test_support.hpp"

namespace bafsynth {
namespace {

Lit L(int d) { return Lit::from_dimacs(d); }

void add_all(SatSolver& s, const std::vector<testing::IntClause>& cnf) {
  for (const auto& c : cnf) {
    std::vector<Lit> lits;
    for (int d : c) lits.push_back(L(d));
    s.add_clause(lits);
  }
}

std::uint64_t word_of(const Assignment& model, unsigned num_vars) {
  std::uint64_t w = 0;
  for (Var v = 1; v <= num_vars; ++v) {
    if (model.defines(v) && model.value(v)) w |= std::uint64_t{1} << (v - 1);
  }
  return w;
}

TEST(SatSolver, Contradiction) {
  SatSolver s;
  s.add_clause({L(1)});
  s.add_clause({L(-1)});
  EXPECT_FALSE(s.solve().satisfiable());
  EXPECT_FALSE(s.okay());
}

TEST(SatSolver, UnitPropagationModel) {
  SatSolver s;
  s.add_clause({L(1), L(2)});
  s.add_clause({L(-1)});
  SatResult r = s.solve();
  ASSERT_TRUE(r.satisfiable());
  EXPECT_FALSE(r.model.value(1));
  EXPECT_TRUE(r.model.value(2));
}

TEST(SatSolver, EmptyClause) {
  SatSolver s;
  s.ensure_vars(3);
  s.add_clause(std::span<const Lit>{});
  EXPECT_FALSE(s.solve().satisfiable());
}

TEST(SatSolver, Assumptions) {
  SatSolver s;
  s.add_clause({L(1), L(2)});
  EXPECT_FALSE(s.solve({L(-1), L(-2)}).satisfiable());
  SatResult r = s.solve({L(-1)});
  ASSERT_TRUE(r.satisfiable());
  EXPECT_TRUE(r.model.value(2));
  // Assumptions are temporary.
  EXPECT_TRUE(s.solve().satisfiable());
  EXPECT_TRUE(s.okay());
}

TEST(SatSolver, EmptyDatabaseIsSatisfiable) {
  SatSolver s;
  SatResult r = s.solve();
  EXPECT_TRUE(r.satisfiable());
  s.ensure_vars(4);
  r = s.solve();
  ASSERT_TRUE(r.satisfiable());
  EXPECT_EQ(r.model.size(), 4u);
}

TEST(SatSolver, NewVarNumbering) {
  SatSolver s;
  EXPECT_EQ(s.new_var(), 1u);
  EXPECT_EQ(s.new_var(), 2u);
  s.add_clause({L(7)});
  EXPECT_EQ(s.num_vars(), 7u);
  EXPECT_EQ(s.new_var(), 8u);
}

TEST(SatSolver, CoverageQueryAfterFirstRecordedSet) {
  // Selector query on the four-clause example after the set {1,3,4} has
  // been recorded: conflict clauses for each edge plus the unit (z2).
  ConflictGraph g = build_conflict_graph(testing::four_clause_spec());
  SatSolver s;
  s.ensure_vars(4);
  for (auto [a, b] : g.edges()) s.add_clause({Lit::neg(a + 1), Lit::neg(b + 1)});
  s.add_clause({Lit::pos(2)});
  SatResult r = s.solve();
  ASSERT_TRUE(r.satisfiable());
  EXPECT_TRUE(r.model.value(2));
  EXPECT_FALSE(r.model.value(1));
  EXPECT_FALSE(r.model.value(4));
  // Also record {2,3}: z1 or z4 is now required, which is impossible.
  s.add_clause({Lit::pos(1), Lit::pos(4)});
  EXPECT_FALSE(s.solve().satisfiable());
}

TEST(SatSolver, WriteDimacs) {
  SatSolver s;
  s.add_clause({L(1), L(-2)});
  std::ostringstream os;
  s.write_dimacs(os);
  EXPECT_NE(os.str().find("p cnf 2 1"), std::string::npos);
  EXPECT_NE(os.str().find("1 -2 0"), std::string::npos);
}

TEST(SatSolver, StopTokenCancels) {
  std::stop_source src;
  src.request_stop();
  SatSolver s(Interrupt(src.get_token()));
  // Pigeonhole 7 into 6: hard enough that the solver polls the interrupt.
  const int holes = 6, pigeons = 7;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  for (int p = 0; p < pigeons; ++p) {
    std::vector<Lit> c;
    for (int h = 0; h < holes; ++h) c.push_back(L(var(p, h)));
    s.add_clause(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q) s.add_clause({L(-var(p, h)), L(-var(q, h))});
  EXPECT_THROW(s.solve(), Cancelled);
}

TEST(SatSolver, PigeonholeUnsat) {
  SatSolver s;
  const int holes = 5, pigeons = 6;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  for (int p = 0; p < pigeons; ++p) {
    std::vector<Lit> c;
    for (int h = 0; h < holes; ++h) c.push_back(L(var(p, h)));
    s.add_clause(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q) s.add_clause({L(-var(p, h)), L(-var(q, h))});
  EXPECT_FALSE(s.solve().satisfiable());
}

TEST(SatSolverProperties, AgreesWithEnumeration) {
  std::mt19937_64 rng(42);
  int sat = 0, unsat = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const unsigned n = 1 + rng() % 12;
    const unsigned m = rng() % 41;
    auto cnf = testing::random_cnf(rng, n, m, 4);
    SatSolver s;
    s.ensure_vars(n);
    add_all(s, cnf);
    SatResult r = s.solve();
    const bool expected = testing::oracle_satisfiable(n, cnf);
    ASSERT_EQ(r.satisfiable(), expected) << "trial " << trial;
    if (r.satisfiable()) {
      ++sat;
      EXPECT_TRUE(testing::oracle_cnf_true(cnf, word_of(r.model, n)));
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 100);
  EXPECT_GT(unsat, 100);
}

TEST(SatSolverProperties, IncrementalWithAssumptions) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned n = 2 + rng() % 10;
    SatSolver s;
    s.ensure_vars(n);
    std::vector<testing::IntClause> db;
    for (int round = 0; round < 5; ++round) {
      auto more = testing::random_cnf(rng, n, static_cast<unsigned>(rng() % 8), 3);
      add_all(s, more);
      db.insert(db.end(), more.begin(), more.end());
      std::vector<Lit> assume;
      std::vector<testing::IntClause> with = db;
      for (unsigned k = 0; k < rng() % 3; ++k) {
        int d = static_cast<int>(1 + rng() % n) * (rng() % 2 ? 1 : -1);
        assume.push_back(L(d));
        with.push_back({d});
      }
      SatResult r = s.solve(assume);
      ASSERT_EQ(r.satisfiable(), testing::oracle_satisfiable(n, with));
      if (r.satisfiable()) {
        EXPECT_TRUE(testing::oracle_cnf_true(with, word_of(r.model, n)));
      }
    }
  }
}

TEST(SatSolverProperties, AddingClausesNeverRestoresSatisfiability) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned n = 1 + rng() % 8;
    SatSolver s;
    s.ensure_vars(n);
    bool was_unsat = false;
    for (int round = 0; round < 10; ++round) {
      add_all(s, testing::random_cnf(rng, n, 2, 3));
      const bool sat = s.solve().satisfiable();
      if (was_unsat) {
        EXPECT_FALSE(sat);
      }
      was_unsat = was_unsat || !sat;
    }
  }
}

TEST(SatSolverProperties, IdenticalCallsGiveIdenticalModels) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned n = 4 + rng() % 20;
    auto cnf = testing::random_cnf(rng, n, static_cast<unsigned>(2 * n + rng() % (2 * n)), 3);
    SatSolver a, b;
    a.ensure_vars(n);
    b.ensure_vars(n);
    add_all(a, cnf);
    add_all(b, cnf);
    SatResult ra = a.solve();
    SatResult rb = b.solve();
    ASSERT_EQ(ra.satisfiable(), rb.satisfiable());
    EXPECT_EQ(ra.model, rb.model);
  }
}

}  // namespace
}  // namespace bafsynth
