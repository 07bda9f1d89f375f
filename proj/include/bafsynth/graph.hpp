// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bafsynth/index_set.hpp"
#include "bafsynth/interrupt.hpp"
#include "bafsynth/spec_model.hpp"

namespace bafsynth {

/// Undirected graph over clause indices with an edge wherever two input
/// parts share a complementary literal pair. Its complement is the consensus
/// graph. Symmetric and irreflexive.
class ConflictGraph {
 public:
  ConflictGraph() = default;
  /// Arbitrary graph on `vertices` vertices; self-loops are rejected and
  /// duplicate edges merged.
  ConflictGraph(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const;
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }
  bool adjacent(std::size_t a, std::size_t b) const;
  /// Each edge once, as (smaller, larger), in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  bool is_independent(const ClauseIndexSet& set) const;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
};

ConflictGraph build_conflict_graph(const Specification& spec);

/// Greedily grows an independent `seed` into a maximal independent set,
/// trying vertices in ascending order. Throws ContractViolation if `seed`
/// is not independent.
ClauseIndexSet extend_to_mis(const ConflictGraph& graph, const ClauseIndexSet& seed);

struct MisEnumeration {
  std::vector<ClauseIndexSet> sets;  // lexicographic order
  bool overflow = false;             // more than `limit` sets exist
};

/// All maximal independent sets in lexicographic order, stopping after
/// `limit` of them. These are exactly the maximal falsifiable subsets of the
/// input parts.
MisEnumeration enumerate_mis(const ConflictGraph& graph, std::size_t limit,
                             const Interrupt& interrupt = {});

struct CliqueCountReport {
  /// Number of maximal cliques of the consensus graph; empty when the
  /// enumeration hit the budget.
  std::optional<std::uint64_t> count;
  std::uint64_t budget = 0;
  bool chordal = false;

  bool budget_exceeded() const { return !count.has_value(); }
};

/// Counts maximal cliques of the consensus graph (pivoting Bron-Kerbosch,
/// stopping once the count exceeds `budget`) and tests it for chordality
/// with maximum cardinality search.
CliqueCountReport analyze_structure(const ConflictGraph& graph, std::uint64_t budget,
                                    const Interrupt& interrupt = {});

/// Chordality test on the consensus graph alone.
bool consensus_graph_is_chordal(const ConflictGraph& graph);

}  // namespace bafsynth
