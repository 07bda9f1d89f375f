// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bafsynth/index_set.hpp"
#include "bafsynth/literal.hpp"

namespace bafsynth {

/// A clause split into its input literals and its output literals.
struct SplitClause {
  Clause x_part;
  Clause y_part;

  friend bool operator==(const SplitClause&, const SplitClause&) = default;
  friend auto operator<=>(const SplitClause&, const SplitClause&) = default;
};

/// A CNF relational specification F(x, y) with its clauses split into
/// input and output parts. Immutable once built.
///
/// Normalization on construction: literals sorted, tautological clauses
/// dropped, exact duplicate clauses dropped (first occurrence kept).
/// Variables declared but unused are kept.
class Specification {
 public:
  Specification() = default;

  /// Splits each clause by variable role. Throws ContractViolation when the
  /// partition overlaps or a clause uses a variable outside it.
  static Specification from_clauses(Var num_vars, std::vector<Var> inputs,
                                    std::vector<Var> outputs,
                                    std::span<const Clause> clauses);
  static Specification from_split(Var num_vars, std::vector<Var> inputs,
                                  std::vector<Var> outputs,
                                  std::vector<SplitClause> clauses);

  Var num_vars() const { return num_vars_; }
  const std::vector<Var>& inputs() const { return inputs_; }
  const std::vector<Var>& outputs() const { return outputs_; }
  const std::vector<SplitClause>& clauses() const { return clauses_; }
  const SplitClause& clause(std::size_t index) const { return clauses_.at(index); }
  std::size_t size() const { return clauses_.size(); }

  bool is_input(Var var) const { return var < role_.size() && role_[var] == kInput; }
  bool is_output(Var var) const { return var < role_.size() && role_[var] == kOutput; }

  /// Clauses whose output part is empty. Such a clause constrains the inputs
  /// alone, so any input falsifying its x-part has no valid output.
  ClauseIndexSet empty_output_clauses() const;

  /// The original clause, x-part and y-part merged and sorted.
  Clause full_clause(std::size_t index) const;

  /// F evaluated on an assignment defined over inputs and outputs.
  bool evaluate(const Assignment& assignment) const;

  /// Hex SHA-256 of the canonical QDIMACS text.
  std::string digest() const;

  friend bool operator==(const Specification& a, const Specification& b) {
    return a.num_vars_ == b.num_vars_ && a.inputs_ == b.inputs_ &&
           a.outputs_ == b.outputs_ && a.clauses_ == b.clauses_;
  }

 private:
  static constexpr std::uint8_t kNone = 0;
  static constexpr std::uint8_t kInput = 1;
  static constexpr std::uint8_t kOutput = 2;

  Var num_vars_ = 0;
  std::vector<Var> inputs_;
  std::vector<Var> outputs_;
  std::vector<SplitClause> clauses_;
  std::vector<std::uint8_t> role_;
};

/// Parses the 2QBF QDIMACS subset: `p cnf V C`, one universal block (the
/// inputs), one existential block (the outputs), then C clauses. Throws
/// ParseError.
Specification parse_qdimacs(std::string_view text);
Specification read_qdimacs_file(const std::filesystem::path& path);

/// Canonical QDIMACS rendering; parse_qdimacs(to_qdimacs(s)) == s.
std::string to_qdimacs(const Specification& spec);

/// Indices of clauses whose x-part is false under `inputs` (empty x-parts
/// always included).
ClauseIndexSet fals(const Specification& spec, const Assignment& inputs);

/// Output-part indices that must be satisfied under `inputs`; the same set
/// as fals() read as y-part indices.
ClauseIndexSet must_sat(const Specification& spec, const Assignment& inputs);

}  // namespace bafsynth
