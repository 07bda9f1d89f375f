// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "bafsynth/error.hpp"
#include "bafsynth/synth.hpp"
#include "bafsynth/verify.hpp"
#include "test_support.hpp"

namespace bafsynth {
namespace {

using testing::four_clause_spec;
using Sets = std::vector<ClauseIndexSet>;

DecisionList two_step_list() {
  SynthesisOutcome out = back_and_forth(four_clause_spec());
  return out.decision_list;
}

TEST(VerifyDecisionList, TwoStepListIsCorrect) {
  Specification spec = four_clause_spec();
  DecisionList dl = two_step_list();
  EXPECT_TRUE(verify_decision_list(spec, dl).verified());
  EXPECT_TRUE(verify_by_enumeration(spec, dl).verified());
}

TEST(VerifyDecisionList, FlippedOutputIsUnsound) {
  Specification spec = four_clause_spec();
  DecisionList dl = two_step_list();
  dl.decisions[1].output.set(3, true);
  dl.decisions[1].output.set(4, false);
  VerificationReport r = verify_decision_list(spec, dl);
  ASSERT_FALSE(r.verified());
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_EQ(r.counterexample->kind, Counterexample::Kind::kSoundness);
  EXPECT_EQ(r.counterexample->decision, 1u);
  EXPECT_TRUE(replay(spec, dl, *r.counterexample));
  // x = (0,0) reaches decision 2 and falsifies the x-part of (x1|x2|-y1).
  Counterexample manual;
  manual.kind = Counterexample::Kind::kSoundness;
  manual.input = Assignment(spec.inputs());
  manual.decision = 1;
  manual.clause = 1;
  EXPECT_TRUE(replay(spec, dl, manual));
  EXPECT_FALSE(verify_by_enumeration(spec, dl).verified());
}

TEST(VerifyDecisionList, MissingDecisionLeavesGap) {
  Specification spec = four_clause_spec();
  DecisionList dl = two_step_list();
  dl.decisions.erase(dl.decisions.begin());
  VerificationReport r = verify_decision_list(spec, dl);
  ASSERT_FALSE(r.verified());
  EXPECT_EQ(r.counterexample->kind, Counterexample::Kind::kCoverageGap);
  // Only the mixed inputs escape the remaining guard x1 <-> x2.
  EXPECT_NE(r.counterexample->input.value(1), r.counterexample->input.value(2));
  EXPECT_TRUE(replay(spec, dl, *r.counterexample));
  VerificationReport e = verify_by_enumeration(spec, dl);
  ASSERT_FALSE(e.verified());
  EXPECT_EQ(e.counterexample->kind, Counterexample::Kind::kCoverageGap);
}

TEST(VerifyDecisionList, EmptyListOnZeroClauseSpecIsAGap) {
  Specification spec = parse_qdimacs("p cnf 2 0\na 1 0\ne 2 0\n");
  DecisionList dl;
  dl.inputs = spec.inputs();
  dl.outputs = spec.outputs();
  dl.spec_digest = spec.digest();
  EXPECT_FALSE(verify_decision_list(spec, dl).verified());
}

TEST(VerifyDecisionList, RejectsForeignList) {
  DecisionList dl = two_step_list();
  EXPECT_THROW(verify_decision_list(testing::xor_unrealizable(), dl), ContractViolation);
}

TEST(Replay, RejectsBogusCounterexample) {
  Specification spec = four_clause_spec();
  DecisionList dl = two_step_list();
  Counterexample gap;
  gap.kind = Counterexample::Kind::kCoverageGap;
  gap.input = Assignment(spec.inputs());
  EXPECT_FALSE(replay(spec, dl, gap));
  Counterexample wrong;
  wrong.kind = Counterexample::Kind::kSoundness;
  wrong.input = Assignment(spec.inputs());
  wrong.decision = 1;
  wrong.clause = 0;
  EXPECT_FALSE(replay(spec, dl, wrong));
}

TEST(VerifyByEnumeration, InputLimit) {
  Specification spec = testing::identity_family(5);
  DecisionList dl = synth_by_mss_enumeration(spec);
  EXPECT_THROW(verify_by_enumeration(spec, dl, 4), ResourceLimitExceeded);
}

TEST(BruteForceSynthesize, Examples) {
  BruteForceTable t = brute_force_synthesize(four_clause_spec());
  ASSERT_EQ(t.outputs.size(), 4u);
  EXPECT_TRUE(t.realizable());
  // x = (0,0): the numerically first valid output is y = (0,0).
  EXPECT_FALSE(t.outputs[0]->value(3));
  EXPECT_FALSE(t.outputs[0]->value(4));
  BruteForceTable u = brute_force_synthesize(testing::xor_unrealizable());
  EXPECT_FALSE(u.realizable());
  EXPECT_FALSE(u.outputs[0].has_value());
  EXPECT_FALSE(u.outputs[1].has_value());
  EXPECT_THROW(brute_force_synthesize(testing::identity_family(9)), ResourceLimitExceeded);
}

TEST(BruteForceMfsMss, FourClauseExample) {
  MfsMss r = brute_force_mfs_mss(four_clause_spec());
  EXPECT_EQ(r.mfs, (Sets{{0}, {1, 2}, {2, 3}}));
  EXPECT_EQ(r.mss, (Sets{{0, 2, 3}, {1, 2}, {1, 3}}));
}

TEST(BruteForceMfsMss, IdentityFamily) {
  MfsMss r = brute_force_mfs_mss(testing::identity_family(4));
  EXPECT_EQ(r.mfs.size(), 16u);
  EXPECT_EQ(r.mss.size(), 16u);
  EXPECT_THROW(brute_force_mfs_mss(testing::identity_family(11)), ResourceLimitExceeded);
}

TEST(VerifyProperties, SatCheckAgreesWithEnumeration) {
  std::mt19937_64 rng(11);
  testing::RandomSpecShape shape;
  shape.max_inputs = 5;
  shape.max_outputs = 4;
  shape.max_clauses = 12;
  int failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Specification spec = testing::random_spec(rng, shape);
    DecisionList dl = synth_by_mss_enumeration(spec);
    // Perturb: flip an output bit or drop a decision.
    if (!dl.decisions.empty() && rng() % 2) {
      Decision& d = dl.decisions[rng() % dl.decisions.size()];
      if (!spec.outputs().empty()) {
        Var v = spec.outputs()[rng() % spec.outputs().size()];
        d.output.set(v, !d.output.value(v));
      }
    } else if (!dl.decisions.empty() && rng() % 2) {
      dl.decisions.erase(dl.decisions.begin() + static_cast<long>(rng() % dl.decisions.size()));
    }
    VerificationReport sat = verify_decision_list(spec, dl);
    VerificationReport enu = verify_by_enumeration(spec, dl);
    ASSERT_EQ(sat.verified(), enu.verified()) << to_qdimacs(spec) << serialize(dl);
    // A verified list implements F on its domain.
    if (sat.verified()) {
      EXPECT_TRUE(testing::oracle_implements(spec, dl));
    } else {
      ++failures;
      EXPECT_TRUE(replay(spec, dl, *sat.counterexample));
      EXPECT_TRUE(replay(spec, dl, *enu.counterexample));
    }
  }
  EXPECT_GT(failures, 20);
}

TEST(VerifyProperties, ExactListsMatchSubsetOracle) {
  std::mt19937_64 rng(12);
  testing::RandomSpecShape shape;
  shape.max_clauses = 12;
  for (int trial = 0; trial < 150; ++trial) {
    Specification spec = testing::random_spec(rng, shape);
    MfsMss r = brute_force_mfs_mss(spec);
    EXPECT_EQ(r.mfs, testing::oracle_mfs_by_subsets(spec)) << to_qdimacs(spec);
    EXPECT_EQ(r.mss, testing::oracle_mss_by_subsets(spec)) << to_qdimacs(spec);
  }
}

TEST(VerifyProperties, BruteForceTableMatchesDomain) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 150; ++trial) {
    Specification spec = testing::random_spec(rng);
    BruteForceTable t = brute_force_synthesize(spec);
    const auto dom = testing::oracle_domain(spec);
    ASSERT_EQ(t.outputs.size(), dom.size());
    std::vector<std::optional<std::uint64_t>> words(dom.size());
    for (std::size_t x = 0; x < dom.size(); ++x) {
      EXPECT_EQ(t.outputs[x].has_value(), static_cast<bool>(dom[x]));
      if (!t.outputs[x]) continue;
      std::uint64_t w = 0;
      for (Var v : spec.outputs())
        if (t.outputs[x]->value(v)) w |= std::uint64_t{1} << (v - 1);
      words[x] = w;
    }
    EXPECT_FALSE(testing::first_failing_input(spec, words).has_value());
    EXPECT_EQ(t.realizable(), testing::oracle_realizable(spec));
  }
}

}  // namespace
}  // namespace bafsynth
