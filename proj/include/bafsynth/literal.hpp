// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <span>
#include <vector>

namespace bafsynth {

/// Variable id, always >= 1 (DIMACS numbering).
using Var = std::uint32_t;

/// A variable or its negation. Ordered by (variable, polarity), positive first.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var var, bool negative) : code_(2 * var + (negative ? 1u : 0u)) {}

  static constexpr Lit pos(Var var) { return Lit(var, false); }
  static constexpr Lit neg(Var var) { return Lit(var, true); }
  static Lit from_dimacs(int value) {
    return Lit(static_cast<Var>(std::abs(value)), value < 0);
  }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negative() const { return (code_ & 1u) != 0; }
  /// Dense index 2*var + sign, used for watch lists and literal tables.
  constexpr std::uint32_t index() const { return code_; }
  int to_dimacs() const {
    return negative() ? -static_cast<int>(var()) : static_cast<int>(var());
  }

  constexpr Lit operator~() const {
    Lit out;
    out.code_ = code_ ^ 1u;
    return out;
  }

  constexpr auto operator<=>(const Lit&) const = default;

 private:
  std::uint32_t code_ = 0;
};

/// A disjunction of literals. Normalized clauses are sorted and duplicate-free.
using Clause = std::vector<Lit>;

/// Builds a clause from DIMACS-style signed integers.
Clause make_clause(std::initializer_list<int> dimacs);

/// Sorts and removes duplicate literals. Returns false if the clause is a
/// tautology (contains v and -v).
bool normalize_clause(Clause& clause);

/// A truth assignment, total over a declared set of variables.
class Assignment {
 public:
  Assignment() = default;
  /// All declared variables start false.
  explicit Assignment(std::vector<Var> variables);
  /// Bit i of `bits` is the value of variables[i] (after sorting is applied
  /// to the pairs, so callers may pass any order).
  static Assignment from_bits(std::span<const Var> variables, std::uint64_t bits);

  bool defines(Var var) const {
    return var < slot_.size() && slot_[var] != 0;
  }
  bool value(Var var) const;
  void set(Var var, bool value);

  bool satisfies(Lit lit) const { return value(lit.var()) != lit.negative(); }
  /// True iff some literal is true. Every variable must be defined.
  bool satisfies(std::span<const Lit> clause) const;

  const std::vector<Var>& variables() const { return vars_; }
  std::size_t size() const { return vars_.size(); }

  /// Restriction to a subset of the declared variables.
  Assignment restrict_to(std::span<const Var> variables) const;

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.vars_ == b.vars_ && a.values_ == b.values_;
  }

 private:
  std::vector<Var> vars_;
  std::vector<std::uint8_t> values_;
  std::vector<std::uint32_t> slot_;  // var -> position + 1, 0 if undeclared
};

}  // namespace bafsynth
