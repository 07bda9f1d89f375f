// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "bafsynth/interrupt.hpp"
#include "bafsynth/literal.hpp"

namespace bafsynth {

enum class SatStatus { kSatisfiable, kUnsatisfiable };

struct SatResult {
  SatStatus status = SatStatus::kUnsatisfiable;
  /// Total over solver variables 1..num_vars(); empty when unsatisfiable.
  Assignment model;

  bool satisfiable() const { return status == SatStatus::kSatisfiable; }
};

/// Incremental CDCL solver: two-watched-literal propagation, first-UIP
/// learning with local minimization, VSIDS branching, Luby restarts, phase
/// saving and activity-based learnt clause reduction.
///
/// The clause database only grows. Solving under assumptions is the only
/// way to make temporary commitments. Every heuristic is fixed and there is
/// no randomness, so identical call sequences give identical models.
/// Decisions default to false.
///
/// Not thread-safe; use one solver per thread.
class SatSolver {
 public:
  struct Statistics {
    std::uint64_t solves = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
  };

  explicit SatSolver(Interrupt interrupt = {});
  ~SatSolver();
  SatSolver(const SatSolver&) = delete;
  SatSolver& operator=(const SatSolver&) = delete;
  SatSolver(SatSolver&&) noexcept;
  SatSolver& operator=(SatSolver&&) noexcept;

  /// Registers and returns the next variable id.
  Var new_var();
  /// Registers every variable up to `max_var`.
  void ensure_vars(Var max_var);
  Var num_vars() const;

  /// Adds a permanent clause; variables are registered on demand. Adding the
  /// empty clause makes every later solve unsatisfiable.
  void add_clause(std::span<const Lit> lits);
  void add_clause(std::initializer_list<Lit> lits) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }

  /// Decides the database conjoined with `assumptions`. Throws Cancelled
  /// when the interrupt fires. Each model is checked against every clause
  /// ever added before it is returned.
  SatResult solve(std::span<const Lit> assumptions = {});
  SatResult solve(std::initializer_list<Lit> assumptions) {
    return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
  }

  /// False once the database is known unsatisfiable without assumptions.
  bool okay() const;

  const Statistics& statistics() const;

  /// Original (non-learnt) clauses in DIMACS, for differential testing.
  void write_dimacs(std::ostream& os) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bafsynth
