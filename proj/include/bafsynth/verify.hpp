// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bafsynth/decision_list.hpp"
#include "bafsynth/interrupt.hpp"
#include "bafsynth/spec_model.hpp"

namespace bafsynth {

enum class VerificationStatus { kVerified, kCounterexample };

struct Counterexample {
  enum class Kind { kSoundness, kCoverageGap };

  Kind kind = Kind::kSoundness;
  /// Over the specification inputs.
  Assignment input;
  /// Soundness only: the 0-based decision that fires on `input` and the
  /// clause its output violates.
  std::size_t decision = 0;
  std::size_t clause = 0;
};

struct VerificationReport {
  VerificationStatus status = VerificationStatus::kVerified;
  std::optional<Counterexample> counterexample;

  bool verified() const { return status == VerificationStatus::kVerified; }
};

/// SAT-based check that every decision is sound wherever its guard holds
/// and that the guards cover every input. Throws ContractViolation if the
/// list was built for a different specification.
VerificationReport verify_decision_list(const Specification& spec, const DecisionList& list,
                                        const Interrupt& interrupt = {});

/// Same contract by enumerating all inputs (at most `max_inputs` of them).
VerificationReport verify_by_enumeration(const Specification& spec, const DecisionList& list,
                                         std::size_t max_inputs = 20);

/// True iff the counterexample reproduces: for soundness the decision fires
/// and its output falsifies the clause; for a gap no decision fires.
bool replay(const Specification& spec, const DecisionList& list, const Counterexample& cex);

struct BruteForceTable {
  /// Indexed by input bits (bit i is inputs[i]); the numerically first
  /// output (bit j is outputs[j]) satisfying the spec, or nullopt.
  std::vector<std::optional<Assignment>> outputs;

  bool realizable() const;
};

/// Exhaustive synthesis. Throws ResourceLimitExceeded when inputs plus
/// outputs exceed `max_vars`.
BruteForceTable brute_force_synthesize(const Specification& spec, std::size_t max_vars = 16);

struct MfsMss {
  std::vector<ClauseIndexSet> mfs;  // lexicographic order
  std::vector<ClauseIndexSet> mss;  // lexicographic order
};

/// Exact MFS and MSS lists: the maximal sets among {i : x_part(i) false}
/// over every input and {i : y_part(i) true} over every output. Throws
/// ResourceLimitExceeded past `max_clauses` clauses or `max_block_vars`
/// variables in either block.
MfsMss brute_force_mfs_mss(const Specification& spec, std::size_t max_clauses = 20,
                           std::size_t max_block_vars = 20);

}  // namespace bafsynth
