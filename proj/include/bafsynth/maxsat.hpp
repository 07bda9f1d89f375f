// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "bafsynth/index_set.hpp"
#include "bafsynth/interrupt.hpp"
#include "bafsynth/literal.hpp"

namespace bafsynth {

struct MaxSatInstance {
  std::vector<Clause> hard;
  std::vector<Clause> soft;
  /// Extra variables the model must be total over, in addition to every
  /// variable occurring in a clause.
  std::vector<Var> variables;
};

enum class MaxSatStatus { kOptimal, kHardUnsatisfiable };

struct MaxSatResult {
  MaxSatStatus status = MaxSatStatus::kHardUnsatisfiable;
  /// Over the instance variables (clause variables plus `variables`).
  Assignment model;
  /// {i : model satisfies soft[i]}, as 0-based indices into the soft list.
  ClauseIndexSet satisfied_soft;
  std::uint64_t sat_calls = 0;

  bool optimal() const { return status == MaxSatStatus::kOptimal; }
};

enum class MaxSatStrategy {
  /// Maximum number of satisfied softs (linear search over a
  /// sequential-counter cardinality bound).
  kMaximum,
  /// Any inclusion-maximal satisfied soft set, grown in one pass in index
  /// order. Cheaper; enough for covering.
  kMaximal,
};

MaxSatResult solve_partial_maxsat(const MaxSatInstance& instance,
                                  MaxSatStrategy strategy = MaxSatStrategy::kMaximum,
                                  const Interrupt& interrupt = {});

}  // namespace bafsynth
