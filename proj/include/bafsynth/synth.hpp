// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "bafsynth/decision_list.hpp"
#include "bafsynth/graph.hpp"
#include "bafsynth/index_set.hpp"
#include "bafsynth/interrupt.hpp"
#include "bafsynth/maxsat.hpp"
#include "bafsynth/sat_solver.hpp"
#include "bafsynth/spec_model.hpp"

namespace bafsynth {

struct SynthesisStats {
  std::uint64_t iterations = 0;
  std::uint64_t sat_calls = 0;
  std::uint64_t maxsat_calls = 0;
  std::uint64_t mss_recorded = 0;
  std::uint64_t partitions = 0;
  std::chrono::nanoseconds wall_time{0};

  SynthesisStats& operator+=(const SynthesisStats& other);
};

struct SynthesisOptions {
  MaxSatStrategy maxsat = MaxSatStrategy::kMaximum;
  /// Enumeration caps for the MFS and MSS enumeration modes.
  std::size_t mis_limit = 100000;
  std::size_t mss_limit = 100000;
  Interrupt interrupt;
};

enum class SynthesisStatus { kRealizable, kUnrealizable };

struct SynthesisOutcome {
  SynthesisStatus status = SynthesisStatus::kUnrealizable;
  /// Set when realizable.
  DecisionList decision_list;
  /// Set when unrealizable: an MFS whose output parts cannot all hold.
  ClauseIndexSet witness_mfs;
  /// Set when unrealizable: an input falsifying exactly `witness_mfs`.
  std::optional<Assignment> witness_input;
  SynthesisStats stats;
  /// Per iteration, the MFS generated and the MSS recorded for it.
  std::vector<ClauseIndexSet> generated_mfs;
  std::vector<ClauseIndexSet> recorded_mss;

  bool realizable() const { return status == SynthesisStatus::kRealizable; }
};

/// Incremental SAT query over one selector z_i per clause. Models are
/// falsifiable subsets of the input parts (no two selected clauses conflict)
/// that escape every recorded MSS (each recorded MSS contributes the clause
/// "some selected index lies outside it").
class CoverageQuery {
 public:
  explicit CoverageQuery(const ConflictGraph& graph, Interrupt interrupt = {});

  /// An MFS not covered by any recorded MSS, or nullopt once every MFS is
  /// covered. The solver's subset is extended greedily in ascending order.
  std::optional<ClauseIndexSet> next_uncovered_mfs(const ConflictGraph& graph);

  /// Adds the coverage clause for `mss`. Recording the full index set adds
  /// the empty clause, after which no MFS is returned.
  void record_mss(const ClauseIndexSet& mss);

  std::uint64_t sat_calls() const { return sat_calls_; }
  /// Coverage clauses added so far, over selector variables z_{i+1} for
  /// clause index i.
  const std::vector<Clause>& coverage_clauses() const { return coverage_; }

  static Var selector(std::size_t clause_index) { return static_cast<Var>(clause_index + 1); }

 private:
  SatSolver solver_;
  std::size_t clause_count_;
  std::vector<Clause> coverage_;
  std::uint64_t sat_calls_ = 0;
};

struct CoverResult {
  bool realizable = false;
  /// Output-part indices satisfied by `witness`; contains the MFS.
  ClauseIndexSet mss;
  /// Over the specification outputs.
  Assignment witness;
};

/// Partial MaxSAT with the MFS output parts hard and every other output part
/// soft. `realizable` is false when the hard part alone is unsatisfiable.
CoverResult covering_mss(const Specification& spec, const ClauseIndexSet& mfs,
                         const SynthesisOptions& options = {});

/// Alternates uncovered-MFS generation and covering-MSS growth until every
/// MFS is covered, then builds the decision list from the MSS sequence.
SynthesisOutcome back_and_forth(const Specification& spec, const SynthesisOptions& options = {});

/// One decision per MFS (lexicographic order); the guard is the conjunction
/// of the x-parts outside the MFS. Throws ResourceLimitExceeded when the MFS
/// count exceeds options.mis_limit.
SynthesisOutcome synth_by_mfs_enumeration(const Specification& spec,
                                          const SynthesisOptions& options = {});

/// One decision per MSS of the output parts, found by repeated MaxSAT with
/// blocking clauses. Needs no realizability: inputs with no valid output are
/// simply left uncovered. Throws ResourceLimitExceeded past options.mss_limit.
DecisionList synth_by_mss_enumeration(const Specification& spec,
                                      const SynthesisOptions& options = {},
                                      SynthesisStats* stats = nullptr);

struct Component {
  Specification spec;
  /// Index in the original specification of each component clause.
  std::vector<std::size_t> original_indices;
};

/// Splits the clauses into groups connected by shared output variables.
/// Inputs are kept whole; outputs are restricted to those each group uses.
/// Components are ordered by their first clause. Throws ContractViolation if
/// a clause has an empty output part.
std::vector<Component> partition_by_output_variables(const Specification& spec);

/// An input assignment falsifying every x-part in `clauses` (which must be
/// pairwise non-conflicting); inputs not mentioned are false.
Assignment falsifying_input(const Specification& spec, const ClauseIndexSet& clauses);

}  // namespace bafsynth
